#pragma once

#include <memory>
#include <string>
#include <thread>

#include "ethervote/api_service.hpp"

namespace ethervote {

/// cpp-httplib front end for ApiService.
class HttpServer {
 public:
  explicit HttpServer(ApiService& service);
  ~HttpServer();

  /// Binds and serves on a background thread; port 0 picks a free port.
  /// Returns the bound port, or -1 on failure.
  int start(const std::string& host, int port);
  /// Blocks the calling thread until stop().
  bool listen(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace ethervote
