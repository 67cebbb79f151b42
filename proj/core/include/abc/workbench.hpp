#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>

#include "abc/document.hpp"

namespace abc {

// Owns one model document. Readers get immutable snapshots and never wait
// for a writer's I/O; writers are serialized and may demand the version
// they last saw (optimistic concurrency). With a path, every accepted
// mutation is persisted before it becomes visible.
class Workbench {
 public:
  using Clock = std::function<std::string()>;

  explicit Workbench(ModelDocument doc, std::optional<std::filesystem::path> path = {},
                     Clock clock = utc_timestamp);

  static Workbench open(const std::filesystem::path& path, Clock clock = utc_timestamp);

  std::shared_ptr<const ModelDocument> snapshot() const;
  std::int64_t version() const { return snapshot()->model.version; }

  // Throws VersionConflict when expected_version is given and stale; any
  // engine error leaves the document untouched.
  std::shared_ptr<const ModelDocument> apply(const Operation& op,
                                             std::optional<std::int64_t> expected_version = {});

  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  void publish(std::shared_ptr<const ModelDocument> doc);

  mutable std::mutex snapshot_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const ModelDocument> current_;
  std::optional<std::filesystem::path> path_;
  Clock clock_;
};

}  // namespace abc
