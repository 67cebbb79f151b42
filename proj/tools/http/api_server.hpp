#pragma once

#include <memory>
#include <string>

#include "abc/error.hpp"
#include "abc/workbench.hpp"

namespace httplib {
class Server;
}

namespace abc::http {

inline constexpr int kDefaultPort = 8750;
inline constexpr const char* kDefaultHost = "127.0.0.1";

// 404 for missing entities, 409 for version and lifecycle conflicts, 422 for
// invalid or invariant-breaking requests, 400 for unparseable bodies.
int status_for(ErrorCode code);

// JSON API over one Workbench. The workbench must outlive the server.
class ApiServer {
 public:
  explicit ApiServer(Workbench& workbench);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  bool bind(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int bind_any(const std::string& host);
  // Blocks until stop() is called.
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  Workbench& workbench_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace abc::http
