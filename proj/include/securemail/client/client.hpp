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

#ifndef SECUREMAIL_CLIENT_CLIENT_HPP_
#define SECUREMAIL_CLIENT_CLIENT_HPP_

// A native stand-in for the browser client. It performs the same requests in
// the same order, so the services can be exercised end to end without a
// browser: sending runs key generation and encryption locally, and reading
// posts the HTML attachment's form, then fetches the key and decrypts.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "securemail/base64.hpp"
#include "securemail/kernel/kernel.hpp"
#include "securemail/mail/attachment.hpp"
#include "securemail/random.hpp"

namespace securemail::client {

struct SendResult {
  std::string message_id;
  std::map<std::string, std::string> credentials;  // recipient -> bearer token
  std::string sender_token;
  std::size_t dispatched = 0;
  std::vector<std::string> failed_recipients;
};

struct ReadingView {
  std::string message_id;
  kernel::SecureMessage message;
};

namespace detail {

/// Splits "http://host:port/path" into ("http://host:port", "/path").
inline std::pair<std::string, std::string> split_url(std::string_view url) {
  auto scheme = url.find("://");
  if (scheme == std::string_view::npos) throw Error(ErrorCode::invalid_request, "url");
  auto slash = url.find('/', scheme + 3);
  if (slash == std::string_view::npos) return {std::string(url), "/"};
  return {std::string(url.substr(0, slash)), std::string(url.substr(slash))};
}

inline httplib::Client connect(const std::string& origin) {
  httplib::Client cli(origin);
  cli.set_connection_timeout(10);
  cli.set_read_timeout(120);
  cli.set_write_timeout(120);
  return cli;
}

inline ErrorCode code_from_response(const httplib::Result& res) {
  if (!res) return ErrorCode::transport_failure;
  if (res->status == 404) return ErrorCode::not_found;
  if (res->status == 409) return ErrorCode::duplicate_message_id;
  if (res->status == 400) {
    auto body = nlohmann::json::parse(res->body, nullptr, false);
    std::string error = body.is_object() ? body.value("error", "") : "";
    if (error == "malformed_envelope") return ErrorCode::malformed_envelope;
    if (error == "empty_recipients") return ErrorCode::empty_recipients;
    return ErrorCode::invalid_request;
  }
  return ErrorCode::transport_failure;
}

inline nlohmann::json expect_json(const httplib::Result& res, int status, std::string_view step) {
  if (!res || res->status != status)
    throw Error(code_from_response(res), std::string(step) + " failed");
  return nlohmann::json::parse(res->body);
}

inline std::string between(std::string_view s, std::string_view open, std::string_view close) {
  auto a = s.find(open);
  if (a == std::string_view::npos) throw Error(ErrorCode::malformed_envelope, "reading page");
  a += open.size();
  auto b = s.find(close, a);
  if (b == std::string_view::npos) throw Error(ErrorCode::malformed_envelope, "reading page");
  return std::string(s.substr(a, b - a));
}

}  // namespace detail

/// Encrypts locally, registers the key, submits the ciphertext bundle and
/// triggers notification. Oversized attachments fail before any request.
inline SendResult send_flow(const std::string& key_service_url,
                            const std::string& message_service_url,
                            const kernel::SecureMessage& msg, const std::string& sender_id,
                            const std::vector<std::string>& recipients) {
  using nlohmann::json;
  for (const auto& a : msg.attachments)
    if (a.data.size() > kernel::kMaxAttachmentBytes)
      throw Error(ErrorCode::attachment_too_large, a.filename);

  SendResult out;
  out.message_id = make_uuid();
  const kernel::MessageKey key = kernel::generate_key();
  const kernel::EncryptedMessage enc =
      kernel::encrypt_message(msg, key, out.message_id, sender_id);

  auto keys = detail::connect(key_service_url);
  std::string key_b64 = base64::encode_url(key.material());
  json registration{{"message_id", out.message_id}, {"key_id", key.key_id()},
                    {"key_b64", key_b64},           {"sender_id", sender_id},
                    {"recipients", recipients}};
  std::string request = registration.dump();
  secure_wipe(key_b64.data(), key_b64.size());
  auto reg = detail::expect_json(keys.Post("/keys", request, "application/json"), 201,
                                 "key registration");
  secure_wipe(request.data(), request.size());
  for (const auto& c : reg.at("credentials"))
    out.credentials[c.at("recipient_id")] = c.at("token");
  out.sender_token = reg.at("sender_token");

  auto mail = detail::connect(message_service_url);
  json attachments = json::array();
  for (const auto& e : enc.attachment_envelopes)
    attachments.push_back(kernel::encode_envelope_text(e));
  json submission{{"message_id", out.message_id},
                  {"sender_id", sender_id},
                  {"recipients", recipients},
                  {"body", kernel::encode_envelope_text(enc.body_envelope)},
                  {"attachments", attachments}};
  detail::expect_json(mail.Post("/messages", submission.dump(), "application/json"), 201,
                      "message submission");

  json notify{{"reader_tokens", out.credentials}};
  auto result = detail::expect_json(
      mail.Post("/messages/" + out.message_id + "/notify", notify.dump(), "application/json"),
      200, "notification");
  out.dispatched = result.at("dispatched");
  for (const auto& f : result.at("failures")) out.failed_recipients.push_back(f.at("recipient"));
  return out;
}

/// The credential carried in a notification link's fragment, if any.
inline std::optional<std::string> credential_from_text(std::string_view text) {
  constexpr std::string_view kMarker = "#credential=";
  auto at = text.find(kMarker);
  if (at == std::string_view::npos) return std::nullopt;
  at += kMarker.size();
  auto end = text.find_first_of("\r\n \"<", at);
  return std::string(text.substr(at, end == std::string_view::npos ? end : end - at));
}

/// Opens a received HTML attachment: posts its form, reads the payload the
/// service embeds in the reading page, fetches the key with `credential` and
/// decrypts. Throws AccessDenied when the key service refuses the credential
/// and AuthenticationFailed on any tampering; nothing is returned partially.
inline ReadingView read_flow(std::string_view attachment_html, const std::string& credential) {
  auto [origin, path] = detail::split_url(mail::parse_form_action(attachment_html));
  httplib::Params params;
  for (const auto& [name, value] : mail::parse_attachment_fields(attachment_html))
    params.emplace(name, value);
  auto page = detail::connect(origin).Post(path, params);
  if (!page || page->status != 200)
    throw Error(page ? ErrorCode::malformed_envelope : ErrorCode::transport_failure, "reading page");

  const std::string key_service = mail::html_unescape(
      detail::between(page->body, "data-key-service=\"", "\""));
  auto payload = nlohmann::json::parse(detail::between(
      page->body, "<script type=\"application/json\" id=\"securemail-payload\">", "</script>"));
  const kernel::EncryptedMessage enc =
      mail::message_from_fields(payload.get<mail::FormFields>());

  auto keys = detail::connect(key_service);
  keys.set_bearer_token_auth(credential);
  auto res = keys.Get("/keys/" + enc.message_id);
  if (!res) throw Error(ErrorCode::transport_failure, "key fetch");
  if (res->status != 200) throw Error(ErrorCode::access_denied);
  auto body = nlohmann::json::parse(res->body);
  auto material = base64::decode_url(body.at("key_b64").get<std::string>());
  if (!material) throw Error(ErrorCode::invalid_key);
  const auto key = kernel::MessageKey::from_bytes(body.at("key_id"), *material);
  secure_wipe(material->data(), material->size());

  return {enc.message_id, kernel::decrypt_message(enc, key)};
}

}  // namespace securemail::client

#endif  // SECUREMAIL_CLIENT_CLIENT_HPP_
