// Copyright 2026 The SecureMail Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SECUREMAIL_TOOLS_SERVER_RUNTIME_HPP_
#define SECUREMAIL_TOOLS_SERVER_RUNTIME_HPP_

#include <csignal>
#include <iostream>
#include <memory>
#include <string>
#include <utility>

#include <httplib.h>

#include "securemail/request_log.hpp"

namespace securemail::tools {

inline httplib::Server* g_running = nullptr;

inline std::pair<std::string, int> parse_listen(const std::string& listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) return {"127.0.0.1", std::stoi(listen)};
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

inline std::unique_ptr<RequestLog> open_log(const std::string& path) {
  return path.empty() ? std::make_unique<RequestLog>() : std::make_unique<RequestLog>(path);
}

/// Serves until SIGINT or SIGTERM. Returns the process exit status.
inline int serve(httplib::Server& server, const std::string& listen, std::string_view name) {
  auto [host, port] = parse_listen(listen);
  if (!server.bind_to_port(host, port)) {
    std::cerr << name << ": cannot bind " << listen << "\n";
    return 1;
  }
  g_running = &server;
  auto stop = [](int) {
    if (g_running) g_running->stop();
  };
  std::signal(SIGINT, stop);
  std::signal(SIGTERM, stop);
  std::cerr << name << " listening on " << host << ":" << port << "\n";
  bool ok = server.listen_after_bind();
  g_running = nullptr;
  return ok ? 0 : 1;
}

}  // namespace securemail::tools

#endif  // SECUREMAIL_TOOLS_SERVER_RUNTIME_HPP_
