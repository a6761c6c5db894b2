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

// REST binding of the key service.
//
//   POST /keys                    {message_id, key_b64, [key_id], sender_id, recipients[]}
//                                 -> 201 {message_id, credentials[{recipient_id, token}], sender_token}
//   GET  /keys/{id}               Authorization: Bearer <recipient token> -> {message_id, key_id, key_b64}
//   GET  /keys/{id}/audit         Authorization: Bearer <sender token>    -> {message_id, fetches[]}
//
// Key material travels as unpadded base64url.

#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "securemail/base64.hpp"
#include "securemail/http_common.hpp"
#include "securemail/keys/key_service.hpp"
#include "securemail/random.hpp"

namespace securemail::keys {

inline void install_routes(httplib::Server& server, KeyService& service) {
  using nlohmann::json;

  server.Post("/keys", [&service](const httplib::Request& req, httplib::Response& res) {
    http::guarded(res, [&] {
      auto body = json::parse(req.body);
      auto material = base64::decode_url(body.at("key_b64").get<std::string>());
      if (!material) throw Error(ErrorCode::invalid_key, "key_b64");
      std::string key_id = body.value("key_id", make_uuid());
      auto key = kernel::MessageKey::from_bytes(key_id, *material);
      secure_wipe(material->data(), material->size());
      std::string message_id = body.at("message_id");
      auto reg = service.register_key(message_id, key, body.at("sender_id"),
                                      body.at("recipients").get<std::vector<std::string>>());
      json creds = json::array();
      for (const auto& c : reg.credentials)
        creds.push_back({{"recipient_id", c.recipient_id}, {"token", c.token}});
      http::send_json(res, 201,
                      {{"message_id", message_id},
                       {"credentials", creds},
                       {"sender_token", reg.sender_token}});
    });
  });

  server.Get(R"(/keys/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    http::guarded(res, [&] {
      auto token = http::bearer_token(req);
      if (!token) throw Error(ErrorCode::access_denied);
      std::string message_id = req.matches[1];
      auto key = service.fetch_key(message_id, *token);
      http::send_json(res, 200,
                      {{"message_id", message_id},
                       {"key_id", key.key_id()},
                       {"key_b64", base64::encode_url(key.material())}});
    });
  });

  server.Get(R"(/keys/([^/]+)/audit)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               http::guarded(res, [&] {
                 auto token = http::bearer_token(req);
                 if (!token) throw Error(ErrorCode::access_denied);
                 std::string message_id = req.matches[1];
                 json fetches = json::array();
                 for (const auto& f : service.audit(message_id, *token))
                   fetches.push_back(
                       {{"recipient_id", f.recipient_id}, {"timestamp_ms", f.timestamp_ms}});
                 http::send_json(res, 200, {{"message_id", message_id}, {"fetches", fetches}});
               });
             });
}

}  // namespace securemail::keys
