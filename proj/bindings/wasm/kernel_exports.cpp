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

#include "securemail_kernel.h"

#include <cstdlib>
#include <cstring>
#include <new>

#include <json.hpp>

#include "securemail/base64.hpp"
#include "securemail/kernel/kernel.hpp"
#include "securemail/random.hpp"

namespace {

using namespace securemail;
using nlohmann::json;

static_assert(SM_ERR_INVALID_REQUEST == static_cast<int>(ErrorCode::invalid_request) + 1);
static_assert(SM_ERR_ATTACHMENT_TOO_LARGE ==
              static_cast<int>(ErrorCode::attachment_too_large) + 1);

ByteView view(const uint8_t* data, size_t len) {
  if (data == nullptr && len != 0) throw Error(ErrorCode::invalid_request, "null buffer");
  return {data, len};
}

kernel::MessageKey key_from_blob(const uint8_t* data, size_t len) {
  auto blob = view(data, len);
  if (blob.size() <= kernel::MessageKey::kSize) throw Error(ErrorCode::invalid_key, "key blob");
  return kernel::MessageKey::from_bytes(as_string(blob.subspan(kernel::MessageKey::kSize)),
                                        blob.first(kernel::MessageKey::kSize));
}

void hand_out(ByteView bytes, uint8_t** out, size_t* out_len) {
  if (out == nullptr || out_len == nullptr) throw Error(ErrorCode::invalid_request, "null out");
  auto* p = static_cast<uint8_t*>(std::malloc(bytes.empty() ? 1 : bytes.size()));
  if (p == nullptr) throw std::bad_alloc();
  if (!bytes.empty()) std::memcpy(p, bytes.data(), bytes.size());
  *out = p;
  *out_len = bytes.size();
}

void hand_out_wiped(Bytes& bytes, uint8_t** out, size_t* out_len) {
  hand_out(bytes, out, out_len);
  secure_wipe(bytes.data(), bytes.size());
}

template <typename Body>
int32_t guarded(Body&& body) {
  try {
    body();
    return SM_OK;
  } catch (const Error& e) {
    return static_cast<int32_t>(e.code()) + 1;
  } catch (const json::exception&) {
    return SM_ERR_INVALID_REQUEST;
  } catch (...) {
    return SM_ERR_INVALID_REQUEST;
  }
}

Bytes decode_b64(const json& j) {
  auto bytes = base64::decode_url(j.get<std::string>());
  if (!bytes) throw Error(ErrorCode::invalid_request, "base64url");
  return std::move(*bytes);
}

}  // namespace

extern "C" {

uint8_t* sm_alloc(size_t size) { return static_cast<uint8_t*>(std::malloc(size ? size : 1)); }

void sm_free(uint8_t* data, size_t size) {
  if (data == nullptr) return;
  secure_wipe(data, size);
  std::free(data);
}

int32_t sm_generate_key(uint8_t** out, size_t* out_len) {
  return guarded([&] {
    auto key = kernel::generate_key();
    Bytes blob(key.material().begin(), key.material().end());
    blob.insert(blob.end(), key.key_id().begin(), key.key_id().end());
    hand_out_wiped(blob, out, out_len);
  });
}

int32_t sm_seal(const uint8_t* key, size_t key_len, const uint8_t* plaintext, size_t plaintext_len,
                const uint8_t* ad, size_t ad_len, uint8_t** out, size_t* out_len) {
  return guarded([&] {
    auto k = key_from_blob(key, key_len);
    auto parsed_ad = kernel::AssociatedData::parse(view(ad, ad_len));
    auto env = kernel::seal(view(plaintext, plaintext_len), k, parsed_ad);
    hand_out(kernel::encode_envelope(env), out, out_len);
  });
}

int32_t sm_open(const uint8_t* key, size_t key_len, const uint8_t* envelope, size_t envelope_len,
                uint8_t** out, size_t* out_len) {
  return guarded([&] {
    auto k = key_from_blob(key, key_len);
    Bytes pt = kernel::open(kernel::decode_envelope(view(envelope, envelope_len)), k);
    hand_out_wiped(pt, out, out_len);
  });
}

int32_t sm_encrypt_message(const uint8_t* key, size_t key_len, const uint8_t* message_json,
                           size_t message_json_len, uint8_t** out, size_t* out_len) {
  return guarded([&] {
    auto k = key_from_blob(key, key_len);
    auto in = json::parse(as_string(view(message_json, message_json_len)));
    kernel::SecureMessage msg;
    msg.subject = in.value("subject", "");
    msg.body = in.at("body");
    for (const auto& a : in.value("attachments", json::array()))
      msg.attachments.push_back({a.at("filename"), decode_b64(a.at("data_b64"))});
    auto enc = kernel::encrypt_message(msg, k, in.at("message_id"), in.at("sender_id"));
    json attachments = json::array();
    for (const auto& e : enc.attachment_envelopes)
      attachments.push_back(kernel::encode_envelope_text(e));
    std::string result = json{{"message_id", enc.message_id},
                              {"body", kernel::encode_envelope_text(enc.body_envelope)},
                              {"attachments", attachments}}
                             .dump();
    hand_out(as_bytes(result), out, out_len);
    for (auto& a : msg.attachments) secure_wipe(a.data.data(), a.data.size());
  });
}

int32_t sm_decrypt_message(const uint8_t* key, size_t key_len, const uint8_t* encrypted_json,
                           size_t encrypted_json_len, uint8_t** out, size_t* out_len) {
  return guarded([&] {
    auto k = key_from_blob(key, key_len);
    auto in = json::parse(as_string(view(encrypted_json, encrypted_json_len)));
    kernel::EncryptedMessage enc;
    enc.message_id = in.at("message_id");
    enc.body_envelope = kernel::decode_envelope_text(in.at("body").get<std::string>());
    for (const auto& a : in.value("attachments", json::array()))
      enc.attachment_envelopes.push_back(kernel::decode_envelope_text(a.get<std::string>()));
    auto msg = kernel::decrypt_message(enc, k);
    json attachments = json::array();
    for (const auto& a : msg.attachments)
      attachments.push_back({{"filename", a.filename}, {"data_b64", base64::encode_url(a.data)}});
    json result{{"message_id", enc.message_id},
                {"subject", msg.subject},
                {"body", msg.body},
                {"attachments", attachments}};
    std::string text = result.dump(-1, ' ', false, json::error_handler_t::replace);
    hand_out(as_bytes(text), out, out_len);
    secure_wipe(text.data(), text.size());
  });
}

}  // extern "C"
