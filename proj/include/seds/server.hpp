#pragma once

#include <memory>
#include <string>

#include <httplib.h>

#include "seds/service.hpp"

namespace seds::service {

inline void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json; charset=utf-8");
}

/// HTTP front end for the evaluation handlers. Every request builds its own
/// board and state; nothing is shared between requests.
inline std::unique_ptr<httplib::Server> make_server() {
  auto svr = std::make_unique<httplib::Server>();
  svr->set_payload_max_length(kMaxBodyBytes);
  svr->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type"}});

  svr->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  svr->Get("/api/health", [](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  svr->Post("/api/evaluate", [](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_evaluate(req.body));
  });
  svr->Post("/api/rank", [](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_rank(req.body));
  });
  svr->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* reason = res.status == 413 ? "PayloadTooLarge" : res.status == 404 ? "NotFound" : "HttpError";
    res.set_content(json{{"error", reason}}.dump(), "application/json; charset=utf-8");
  });
  return svr;
}

}  // namespace seds::service
