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

// The client-side cryptographic kernel: key generation, envelope sealing and
// opening, and whole-message encryption. The same code is compiled for the
// browser (see bindings/wasm) and used natively by tests and tools.

#include <cstdint>
#include <string>
#include <vector>

#include "securemail/bytes.hpp"
#include "securemail/error.hpp"
#include "securemail/kernel/envelope.hpp"
#include "securemail/kernel/gcm.hpp"
#include "securemail/kernel/message_key.hpp"
#include "securemail/random.hpp"

namespace securemail::kernel {

inline constexpr std::size_t kMaxAttachmentBytes = 20u * 1024u * 1024u;
inline constexpr std::string_view kBodyContentType = "text/plain; charset=utf-8";
inline constexpr std::string_view kAttachmentContentType = "application/octet-stream";

struct Attachment {
  std::string filename;
  Bytes data;

  friend bool operator==(const Attachment&, const Attachment&) = default;
};

struct SecureMessage {
  std::string subject;
  std::string body;
  std::vector<Attachment> attachments;

  friend bool operator==(const SecureMessage&, const SecureMessage&) = default;
};

inline MessageKey generate_key() {
  MessageKey::Material material{};
  fill_random(material);
  MessageKey key(make_uuid(), material);
  secure_wipe(material.data(), material.size());
  return key;
}

namespace detail {

inline Envelope seal_with(const Aes128Gcm& gcm, ByteView plaintext, AssociatedData ad,
                          const std::array<std::uint8_t, kNonceSize>& nonce) {
  Envelope e;
  e.nonce = nonce;
  e.ad = std::move(ad);
  e.ciphertext.resize(plaintext.size());
  e.tag = gcm.encrypt(e.nonce, e.ad.serialize(), plaintext, e.ciphertext);
  return e;
}

inline Envelope seal_with(const Aes128Gcm& gcm, ByteView plaintext, AssociatedData ad) {
  std::array<std::uint8_t, kNonceSize> nonce{};
  fill_random(nonce);
  return seal_with(gcm, plaintext, std::move(ad), nonce);
}

inline Bytes open_with(const Aes128Gcm& gcm, const Envelope& e) {
  if (e.version != kEnvelopeVersion) throw Error(ErrorCode::unsupported_version);
  Bytes out(e.ciphertext.size());
  if (!gcm.decrypt(e.nonce, e.ad.serialize(), e.ciphertext, e.tag, out))
    throw Error(ErrorCode::authentication_failed);
  return out;
}

// Part framing inside the encrypted payload: 4-byte BE header length, header
// (subject or filename), then content. Keeps names out of the visible AD.
inline Bytes frame_part(std::string_view header, ByteView content) {
  Bytes out(4 + header.size() + content.size());
  put_u32_be(out.data(), static_cast<std::uint32_t>(header.size()));
  std::copy(header.begin(), header.end(), out.begin() + 4);
  std::copy(content.begin(), content.end(), out.begin() + 4 + header.size());
  return out;
}

inline std::pair<std::string, Bytes> unframe_part(ByteView framed) {
  if (framed.size() < 4) throw Error(ErrorCode::malformed_envelope, "part framing");
  std::uint32_t len = get_u32_be(framed.data());
  if (len > framed.size() - 4) throw Error(ErrorCode::malformed_envelope, "part framing");
  auto header = as_string(framed.subspan(4, len));
  auto rest = framed.subspan(4 + len);
  return {std::move(header), Bytes(rest.begin(), rest.end())};
}

}  // namespace detail

/// Seals `plaintext` under a fresh random 96-bit nonce with the canonical
/// serialization of `ad` as associated data.
inline Envelope seal(ByteView plaintext, const MessageKey& key, const AssociatedData& ad) {
  Aes128Gcm gcm(key.material());
  return detail::seal_with(gcm, plaintext, ad);
}

#if defined(SECUREMAIL_TEST_HOOKS)
/// Deterministic sealing for known-answer tests. Absent from regular builds.
inline Envelope seal_with_nonce(ByteView plaintext, const MessageKey& key,
                                const AssociatedData& ad,
                                const std::array<std::uint8_t, kNonceSize>& nonce) {
  Aes128Gcm gcm(key.material());
  return detail::seal_with(gcm, plaintext, ad, nonce);
}
#endif

/// Returns the plaintext only if the tag verifies; otherwise throws
/// AuthenticationFailed (or UnsupportedVersion) and releases nothing.
inline Bytes open(const Envelope& envelope, const MessageKey& key) {
  Aes128Gcm gcm(key.material());
  return detail::open_with(gcm, envelope);
}

inline EncryptedMessage encrypt_message(const SecureMessage& msg, const MessageKey& key,
                                        const std::string& message_id,
                                        const std::string& sender_id) {
  for (const auto& a : msg.attachments)
    if (a.data.size() > kMaxAttachmentBytes)
      throw Error(ErrorCode::attachment_too_large, a.filename);

  Aes128Gcm gcm(key.material());
  EncryptedMessage out;
  out.message_id = message_id;
  {
    Bytes framed = detail::frame_part(msg.subject, as_bytes(msg.body));
    out.body_envelope = detail::seal_with(
        gcm, framed,
        {message_id, PartLabel::body, 0, sender_id, std::string(kBodyContentType)});
    secure_wipe(framed.data(), framed.size());
  }
  out.attachment_envelopes.reserve(msg.attachments.size());
  for (std::size_t i = 0; i < msg.attachments.size(); ++i) {
    const auto& a = msg.attachments[i];
    Bytes framed = detail::frame_part(a.filename, a.data);
    out.attachment_envelopes.push_back(detail::seal_with(
        gcm, framed,
        {message_id, PartLabel::attachment, static_cast<std::uint32_t>(i), sender_id,
         std::string(kAttachmentContentType)}));
    secure_wipe(framed.data(), framed.size());
  }
  return out;
}

/// Opens the body first and then each attachment in order. If any part fails
/// (or sits at the wrong position) nothing is returned.
inline SecureMessage decrypt_message(const EncryptedMessage& enc, const MessageKey& key) {
  if (!parts_consistent(enc))
    throw Error(ErrorCode::authentication_failed, "part position mismatch");
  Aes128Gcm gcm(key.material());
  std::vector<Bytes> opened;
  opened.reserve(enc.part_count());
  try {
    for (std::size_t i = 0; i < enc.part_count(); ++i)
      opened.push_back(detail::open_with(gcm, enc.part(i)));
  } catch (...) {
    for (auto& p : opened) secure_wipe(p.data(), p.size());
    throw;
  }
  SecureMessage msg;
  auto [subject, body] = detail::unframe_part(opened[0]);
  msg.subject = std::move(subject);
  msg.body = as_string(body);
  for (std::size_t i = 1; i < opened.size(); ++i) {
    auto [name, data] = detail::unframe_part(opened[i]);
    msg.attachments.push_back({std::move(name), std::move(data)});
  }
  for (auto& p : opened) secure_wipe(p.data(), p.size());
  return msg;
}

}  // namespace securemail::kernel
