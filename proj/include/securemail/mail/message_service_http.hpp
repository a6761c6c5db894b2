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

// REST binding of the message service.
//
//   POST /messages                 {message_id, sender_id, recipients[], body, attachments[]}
//                                  -> 201 {message_id}
//   GET  /messages/{id}/attachment -> text/html download
//   POST /messages/{id}/notify     [{reader_tokens: {recipient: token}}]
//                                  -> {dispatched, failures[{recipient, reason}]}
//   POST /read                     urlencoded attachment form -> text/html reading page
//   GET  /static/...               client bundle and portable kernel module

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "securemail/http_common.hpp"
#include "securemail/mail/message_service.hpp"

namespace securemail::mail {

inline void install_routes(httplib::Server& server, MessageService& service,
                           const std::filesystem::path& static_dir = {}) {
  using nlohmann::json;

  server.Post("/messages", [&service](const httplib::Request& req, httplib::Response& res) {
    http::guarded(res, [&] {
      auto body = json::parse(req.body);
      auto id = service.submit_encoded(
          body.at("message_id"), body.at("body"),
          body.value("attachments", std::vector<std::string>{}),
          body.at("recipients").get<std::vector<std::string>>(), body.at("sender_id"));
      http::send_json(res, 201, {{"message_id", id}});
    });
  });

  server.Get(R"(/messages/([^/]+)/attachment)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               http::guarded(res, [&] {
                 auto attachment = service.render_attachment(req.matches[1]);
                 res.set_header("Content-Disposition", "attachment; filename=\"" +
                                                           std::string(kAttachmentFilename) + "\"");
                 res.set_content(attachment.html, "text/html; charset=utf-8");
               });
             });

  server.Post(R"(/messages/([^/]+)/notify)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                http::guarded(res, [&] {
                  std::map<std::string, std::string> tokens;
                  if (!req.body.empty()) {
                    auto body = json::parse(req.body);
                    tokens = body.value("reader_tokens", tokens);
                  }
                  auto result = service.notify_recipients(req.matches[1], tokens);
                  json failures = json::array();
                  for (const auto& f : result.failures)
                    failures.push_back({{"recipient", f.recipient}, {"reason", f.reason}});
                  http::send_json(res, 200,
                                  {{"dispatched", result.dispatched}, {"failures", failures}});
                });
              });

  server.Post("/read", [&service](const httplib::Request& req, httplib::Response& res) {
    FormFields fields;
    for (const auto& [name, value] : req.params) fields[name] = value;
    auto page = service.serve_reading_page(fields);
    res.status = page.status;
    res.set_content(page.html, "text/html; charset=utf-8");
  });

  if (!static_dir.empty()) server.set_mount_point(service.config().static_prefix, static_dir);
}

}  // namespace securemail::mail
