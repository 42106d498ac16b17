// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// HTTP/1.1 binding of ProbeService:
//   GET  /scenes          case listing grouped by scene
//   GET  /cases/{id}      case geometry
//   POST /predict         probe with manual neighbors
//   GET  /model           loaded checkpoint metadata
//   POST /model/load      {"path": ...} swap checkpoint

#pragma once

#include <memory>
#include <string>

#include "httplib.h"
#include "socialcircle/probe.hpp"

namespace socialcircle {

inline void register_routes(httplib::Server& server, ProbeService& service) {
  auto reply = [](httplib::Response& res, const ProbeService::Response& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.Get("/scenes", [&service, reply](const httplib::Request&, httplib::Response& res) { reply(res, service.scenes()); });
  server.Get(R"(/cases/(.+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.case_geometry(httplib::detail::decode_url(req.matches[1].str(), false)));
  });
  server.Post("/predict", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.predict(req.body));
  });
  server.Get("/model", [&service, reply](const httplib::Request&, httplib::Response& res) { reply(res, service.model_info()); });
  server.Post("/model/load", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.load(req.body));
  });
}

/// Serves until the server is stopped. Returns false if binding failed.
inline bool serve(ProbeService& service, const std::string& host, int port) {
  httplib::Server server;
  register_routes(server, service);
  return server.listen(host, port);
}

}  // namespace socialcircle
