#pragma once

// Binds a Service to a cpp-httplib server. Every GET/POST is forwarded
// unchanged; responses are always JSON.

#include <httplib.h>

#include "greenalgo/interface/service.hpp"

namespace greenalgo::interface {

inline void mount(httplib::Server& server, const Service& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Put(".*", forward);
  server.Delete(".*", forward);
}

}  // namespace greenalgo::interface
