#pragma once

#include <memory>
#include <string>

#include "mss/api.hpp"

namespace mss {

/// HTTP front end for Api. Every response carries CORS headers for
/// `allowed_origin`; OPTIONS preflights are answered directly.
class HttpServer {
 public:
  explicit HttpServer(Api& api, std::string allowed_origin = "*");
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the port (0 picks a free one) and returns it, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); returns false if the listener failed.
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mss
