#include "abc/workbench.hpp"

#include "abc/error.hpp"

namespace abc {

Workbench::Workbench(ModelDocument doc, std::optional<std::filesystem::path> path, Clock clock)
    : current_(std::make_shared<const ModelDocument>(std::move(doc))),
      path_(std::move(path)),
      clock_(std::move(clock)) {}

Workbench Workbench::open(const std::filesystem::path& path, Clock clock) {
  return Workbench(load(path), path, std::move(clock));
}

std::shared_ptr<const ModelDocument> Workbench::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void Workbench::publish(std::shared_ptr<const ModelDocument> doc) {
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(doc);
}

std::shared_ptr<const ModelDocument> Workbench::apply(const Operation& op,
                                                      std::optional<std::int64_t> expected_version) {
  std::lock_guard writer(write_mutex_);
  auto base = snapshot();
  if (expected_version && *expected_version != base->model.version) {
    throw Error(ErrorCode::VersionConflict,
                "model is at version " + std::to_string(base->model.version) +
                    ", request expected " + std::to_string(*expected_version));
  }
  auto next = std::make_shared<const ModelDocument>(record(*base, op, clock_()));
  if (path_) save(*next, *path_);
  publish(next);
  return next;
}

}  // namespace abc
