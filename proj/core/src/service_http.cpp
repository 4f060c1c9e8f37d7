#include <iostream>

#include "gencur/errors.hpp"
#include "gencur/service.hpp"
#include "httplib.h"

namespace gencur {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, int ok_status, F&& f) {
  try {
    send_json(res, ok_status, f());
  } catch (const std::exception& e) {
    const ServiceError err = to_service_error(e);
    send_json(res, err.status(), err.to_json());
  }
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::exception& e) {
    throw ServiceError(400, "invalid_json", e.what());
  }
}

}  // namespace

struct HttpServer::Impl {
  Impl(SessionManager& m, HttpOptions o) : manager(m), options(std::move(o)) {}
  SessionManager& manager;
  HttpOptions options;
  httplib::Server server;
};

HttpServer::HttpServer(SessionManager& manager, HttpOptions options)
    : impl_(std::make_unique<Impl>(manager, std::move(options))) {
  auto& server = impl_->server;
  auto& m = impl_->manager;
  const auto& opts = impl_->options;
  server.new_task_queue = [n = opts.threads] { return new httplib::ThreadPool(std::max(1U, n)); };
  if (opts.static_dir && !server.set_mount_point("/", opts.static_dir->string())) {
    throw ArgumentError("static directory does not exist: " + opts.static_dir->string());
  }

  server.Post("/sessions", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 201, [&] { return m.create_session(parse_body(req)); });
  });
  server.Get(R"(/sessions/([0-9a-f]+))", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return m.get(req.matches[1]); });
  });
  server.Get(R"(/sessions/([0-9a-f]+)/candidates)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return m.candidates(req.matches[1]); });
  });
  server.Post(R"(/sessions/([0-9a-f]+)/preferences)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return m.submit_preference(req.matches[1], parse_body(req)); });
  });
  server.Post(R"(/sessions/([0-9a-f]+)/next-batch)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return m.next_batch(req.matches[1]); });
  });
  server.Get(R"(/sessions/([0-9a-f]+)/posterior)", [&m](const httplib::Request& req, httplib::Response& res) {
    const bool cov = req.has_param("cov") && req.get_param_value("cov") == "1";
    guarded(res, 200, [&] { return m.posterior(req.matches[1], cov); });
  });
  server.Post(R"(/sessions/([0-9a-f]+)/close)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return m.close(req.matches[1]); });
  });
  server.Get(R"(/sessions/([0-9a-f]+)/events)", [&m](const httplib::Request& req, httplib::Response& res) {
    guarded(res, 200, [&] { return m.events(req.matches[1]); });
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send_json(res, res.status, {{"code", "not_found"}, {"message", "no such endpoint"}});
    }
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& opts = impl_->options;
  const int port = opts.port == 0 ? impl_->server.bind_to_any_port(opts.host)
                                  : (impl_->server.bind_to_port(opts.host, opts.port) ? opts.port : -1);
  if (port < 0) throw Error("cannot listen on " + opts.host + ":" + std::to_string(opts.port));
  return port;
}

void HttpServer::run() {
  if (!impl_->server.listen_after_bind()) throw Error("server stopped with an error");
}

void HttpServer::stop() { impl_->server.stop(); }

void serve_http(SessionManager& manager, const HttpOptions& options) {
  HttpServer server(manager, options);
  const int port = server.bind();
  std::cerr << "listening on " << options.host << ':' << port << '\n';
  server.run();
}

}  // namespace gencur
