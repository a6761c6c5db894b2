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

// Envelope data model and wire codec. Nothing in this header touches key
// material, so untrusted services may depend on it freely.
//
// Binary layout:
//   version(1) || nonce(12) || ad_len(4, BE) || ad(ad_len) || tag(16) || ciphertext
//
// Canonical associated data, each field as a 4-byte big-endian length followed
// by its bytes, in this order:
//   message_id, part_label ("body" | "attachment"), part_index (4-byte BE),
//   sender_id, content_type

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "securemail/base64.hpp"
#include "securemail/bytes.hpp"
#include "securemail/error.hpp"

namespace securemail::kernel {

inline constexpr std::uint8_t kEnvelopeVersion = 0x01;
inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kTagSize = 16;
inline constexpr std::size_t kEnvelopeHeaderSize = 1 + kNonceSize + 4;
inline constexpr std::size_t kAssociatedDataFields = 5;

enum class PartLabel : std::uint8_t { body, attachment };

constexpr std::string_view to_string(PartLabel label) {
  return label == PartLabel::body ? "body" : "attachment";
}

struct AssociatedData {
  std::string message_id;
  PartLabel part_label = PartLabel::body;
  std::uint32_t part_index = 0;
  std::string sender_id;
  std::string content_type;

  friend bool operator==(const AssociatedData&, const AssociatedData&) = default;

  Bytes serialize() const {
    Bytes out;
    auto field = [&out](ByteView bytes) {
      std::uint8_t len[4];
      put_u32_be(len, static_cast<std::uint32_t>(bytes.size()));
      out.insert(out.end(), len, len + 4);
      out.insert(out.end(), bytes.begin(), bytes.end());
    };
    std::uint8_t index[4];
    put_u32_be(index, part_index);
    field(as_bytes(message_id));
    field(as_bytes(to_string(part_label)));
    field(index);
    field(as_bytes(sender_id));
    field(as_bytes(content_type));
    return out;
  }

  /// Inverse of serialize(); rejects anything serialize() cannot produce.
  static AssociatedData parse(ByteView bytes) {
    std::vector<ByteView> fields;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
      if (bytes.size() - pos < 4 || fields.size() == kAssociatedDataFields)
        throw Error(ErrorCode::malformed_envelope, "associated data framing");
      std::uint32_t len = get_u32_be(bytes.data() + pos);
      pos += 4;
      if (len > bytes.size() - pos)
        throw Error(ErrorCode::malformed_envelope, "associated data field length");
      fields.push_back(bytes.subspan(pos, len));
      pos += len;
    }
    if (fields.size() != kAssociatedDataFields)
      throw Error(ErrorCode::malformed_envelope, "associated data field count");
    AssociatedData ad;
    ad.message_id = as_string(fields[0]);
    auto label = as_string(fields[1]);
    if (label == "body") {
      ad.part_label = PartLabel::body;
    } else if (label == "attachment") {
      ad.part_label = PartLabel::attachment;
    } else {
      throw Error(ErrorCode::malformed_envelope, "unknown part label");
    }
    if (fields[2].size() != 4)
      throw Error(ErrorCode::malformed_envelope, "part index width");
    ad.part_index = get_u32_be(fields[2].data());
    if (ad.part_label == PartLabel::body && ad.part_index != 0)
      throw Error(ErrorCode::malformed_envelope, "body part index must be 0");
    ad.sender_id = as_string(fields[3]);
    ad.content_type = as_string(fields[4]);
    return ad;
  }
};

struct Envelope {
  std::uint8_t version = kEnvelopeVersion;
  std::array<std::uint8_t, kNonceSize> nonce{};
  Bytes ciphertext;
  std::array<std::uint8_t, kTagSize> tag{};
  AssociatedData ad;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// Byte offsets of each region inside an encoded envelope.
struct EnvelopeLayout {
  std::size_t nonce_offset = 1;
  std::size_t ad_offset = 0;
  std::size_t ad_size = 0;
  std::size_t tag_offset = 0;
  std::size_t ciphertext_offset = 0;
  std::size_t ciphertext_size = 0;
  std::size_t total_size = 0;
};

/// Reads only the framing (version, lengths); the AD bytes are not parsed.
inline EnvelopeLayout parse_layout(ByteView bytes) {
  if (bytes.empty()) throw Error(ErrorCode::malformed_envelope, "empty envelope");
  if (bytes[0] != kEnvelopeVersion)
    throw Error(ErrorCode::unsupported_version);
  if (bytes.size() < kEnvelopeHeaderSize + kTagSize)
    throw Error(ErrorCode::malformed_envelope, "short envelope");
  std::uint32_t ad_len = get_u32_be(bytes.data() + 1 + kNonceSize);
  if (ad_len > bytes.size() - kEnvelopeHeaderSize - kTagSize)
    throw Error(ErrorCode::malformed_envelope, "associated data length");
  EnvelopeLayout l;
  l.ad_offset = kEnvelopeHeaderSize;
  l.ad_size = ad_len;
  l.tag_offset = l.ad_offset + ad_len;
  l.ciphertext_offset = l.tag_offset + kTagSize;
  l.ciphertext_size = bytes.size() - l.ciphertext_offset;
  l.total_size = bytes.size();
  return l;
}

inline Bytes encode_envelope(const Envelope& e) {
  Bytes ad = e.ad.serialize();
  Bytes out;
  out.reserve(kEnvelopeHeaderSize + ad.size() + kTagSize + e.ciphertext.size());
  out.push_back(e.version);
  out.insert(out.end(), e.nonce.begin(), e.nonce.end());
  std::uint8_t len[4];
  put_u32_be(len, static_cast<std::uint32_t>(ad.size()));
  out.insert(out.end(), len, len + 4);
  out.insert(out.end(), ad.begin(), ad.end());
  out.insert(out.end(), e.tag.begin(), e.tag.end());
  out.insert(out.end(), e.ciphertext.begin(), e.ciphertext.end());
  return out;
}

/// Throws MalformedEnvelope or UnsupportedVersion.
inline Envelope decode_envelope(ByteView bytes) {
  EnvelopeLayout l = parse_layout(bytes);
  Envelope e;
  e.version = bytes[0];
  std::copy_n(bytes.begin() + l.nonce_offset, kNonceSize, e.nonce.begin());
  e.ad = AssociatedData::parse(bytes.subspan(l.ad_offset, l.ad_size));
  std::copy_n(bytes.begin() + l.tag_offset, kTagSize, e.tag.begin());
  e.ciphertext.assign(bytes.begin() + l.ciphertext_offset, bytes.end());
  return e;
}

/// Text transport: unpadded base64url of the binary layout.
inline std::string encode_envelope_text(const Envelope& e) {
  return base64::encode_url(encode_envelope(e));
}

inline Envelope decode_envelope_text(std::string_view text) {
  auto bytes = base64::decode_url(text);
  if (!bytes) throw Error(ErrorCode::malformed_envelope, "invalid base64url");
  return decode_envelope(*bytes);
}

/// A message as it leaves the sender: one body envelope plus one envelope per
/// attachment, all sealed under the same message key.
struct EncryptedMessage {
  std::string message_id;
  Envelope body_envelope;
  std::vector<Envelope> attachment_envelopes;

  std::size_t part_count() const noexcept { return 1 + attachment_envelopes.size(); }

  const Envelope& part(std::size_t i) const {
    return i == 0 ? body_envelope : attachment_envelopes.at(i - 1);
  }

  friend bool operator==(const EncryptedMessage&, const EncryptedMessage&) = default;
};

/// True when every envelope carries this message's id and sits at the
/// position its associated data names.
inline bool parts_consistent(const EncryptedMessage& m) {
  const auto& b = m.body_envelope.ad;
  if (b.message_id != m.message_id || b.part_label != PartLabel::body || b.part_index != 0)
    return false;
  for (std::size_t i = 0; i < m.attachment_envelopes.size(); ++i) {
    const auto& ad = m.attachment_envelopes[i].ad;
    if (ad.message_id != m.message_id || ad.part_label != PartLabel::attachment ||
        ad.part_index != i || ad.sender_id != b.sender_id)
      return false;
  }
  return true;
}

}  // namespace securemail::kernel
