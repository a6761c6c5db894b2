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

#pragma once

// Shared helpers for the two HTTP front ends.

#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "securemail/error.hpp"
#include "securemail/request_log.hpp"

namespace securemail::http {

static_assert(CPPHTTPLIB_FORM_URL_ENCODED_PAYLOAD_MAX_LENGTH >= (64u << 20),
              "build with CPPHTTPLIB_FORM_URL_ENCODED_PAYLOAD_MAX_LENGTH raised (see CMakeLists.txt)");

inline void attach_request_log(httplib::Server& server, RequestLog& log) {
  server.set_logger([&log](const httplib::Request& req, const httplib::Response& res) {
    log.record(req.method, req.path, res.status);
  });
}

inline std::optional<std::string> bearer_token(const httplib::Request& req) {
  auto header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0)
    return std::nullopt;
  return header.substr(kPrefix.size());
}

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

/// Maps library errors onto HTTP. NotFound and AccessDenied deliberately
/// share one status and body so callers cannot probe which ids exist.
inline void send_error(httplib::Response& res, const Error& e) {
  switch (e.code()) {
    case ErrorCode::not_found:
    case ErrorCode::access_denied:
      send_json(res, 404, {{"error", "unavailable"}});
      return;
    case ErrorCode::duplicate_message_id:
      send_json(res, 409, {{"error", "duplicate_message_id"}});
      return;
    case ErrorCode::empty_recipients:
      send_json(res, 400, {{"error", "empty_recipients"}});
      return;
    case ErrorCode::malformed_envelope:
    case ErrorCode::unsupported_version:
      send_json(res, 400, {{"error", "malformed_envelope"}});
      return;
    case ErrorCode::invalid_key:
    case ErrorCode::invalid_request:
      send_json(res, 400, {{"error", "invalid_request"}});
      return;
    default:
      send_json(res, 500, {{"error", "internal"}});
  }
}

/// Runs `handler`, translating parse and library errors into responses.
template <typename Handler>
void guarded(httplib::Response& res, Handler&& handler) {
  try {
    handler();
  } catch (const Error& e) {
    send_error(res, e);
  } catch (const nlohmann::json::exception&) {
    send_json(res, 400, {{"error", "invalid_request"}});
  }
}

}  // namespace securemail::http
