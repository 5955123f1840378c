#include "mss/http_server.hpp"

#include "httplib.h"

namespace mss {

struct HttpServer::Impl {
  Api* api;
  std::string origin;
  httplib::Server server;
};

namespace {

void add_cors(httplib::Response& res, const std::string& origin) {
  res.set_header("Access-Control-Allow-Origin", origin);
  res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  res.set_header("Access-Control-Allow-Headers", "Content-Type");
}

}  // namespace

HttpServer::HttpServer(Api& api, std::string allowed_origin) : impl_(std::make_unique<Impl>()) {
  impl_->api = &api;
  impl_->origin = std::move(allowed_origin);
  Impl* impl = impl_.get();
  auto forward = [impl](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    r.body = req.body;
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    const ApiResponse out = impl->api->handle(r);
    res.status = out.status;
    add_cors(res, impl->origin);
    res.set_content(out.body.dump(), "application/json");
  };
  impl_->server.Get(R"(/api/.*)", forward);
  impl_->server.Post(R"(/api/.*)", forward);
  impl_->server.Options(R"(/api/.*)", [impl](const httplib::Request&, httplib::Response& res) {
    add_cors(res, impl->origin);
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace mss
