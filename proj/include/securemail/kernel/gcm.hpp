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

// AES-128-GCM with 96-bit nonces and 128-bit tags (NIST SP 800-38D).
//
// GHASH uses Shoup's 8-bit table method: 256 precomputed multiples of H per
// key plus a 16-bit reduction table shared by all keys. Field elements are
// held as two big-endian 64-bit halves, so bit 0 of the GCM polynomial is the
// most significant bit of `hi`.

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>

#include "securemail/bytes.hpp"
#include "securemail/kernel/aes128.hpp"

namespace securemail::kernel {

namespace detail {

struct Block128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  constexpr Block128& operator^=(const Block128& o) noexcept {
    hi ^= o.hi;
    lo ^= o.lo;
    return *this;
  }
};

// Multiplication by x in GF(2^128) with the GCM bit order.
constexpr Block128 mul_x(Block128 v) noexcept {
  std::uint64_t carry = v.lo & 1;
  v.lo = (v.lo >> 1) | (v.hi << 63);
  v.hi >>= 1;
  if (carry) v.hi ^= 0xe100000000000000ULL;
  return v;
}

// kReduce8[b] is the top 16 bits of b * x^8 where b occupies the lowest byte,
// i.e. the feedback produced when the low byte is shifted out.
constexpr std::array<std::uint16_t, 256> make_reduce8() {
  std::array<std::uint16_t, 256> table{};
  for (int b = 0; b < 256; ++b) {
    Block128 v{0, static_cast<std::uint64_t>(b)};
    for (int i = 0; i < 8; ++i) v = mul_x(v);
    table[b] = static_cast<std::uint16_t>(v.hi >> 48);
  }
  return table;
}

inline constexpr auto kReduce8 = make_reduce8();

inline Block128 load_block(const std::uint8_t* p) noexcept {
  return {get_u64_be(p), get_u64_be(p + 8)};
}

inline void store_block(const Block128& b, std::uint8_t* p) noexcept {
  put_u64_be(p, b.hi);
  put_u64_be(p + 8, b.lo);
}

// Multiplication by the hash key H, table-driven.
class GhashKey {
 public:
  explicit GhashKey(const std::uint8_t* h) noexcept {
    table_[0] = {};
    table_[0x80] = load_block(h);
    for (int i = 0x40; i > 0; i >>= 1) table_[i] = mul_x(table_[i * 2]);
    for (int i = 2; i < 256; i <<= 1)
      for (int j = 1; j < i; ++j) {
        table_[i + j] = table_[i];
        table_[i + j] ^= table_[j];
      }
  }

  GhashKey(const GhashKey&) = default;
  GhashKey& operator=(const GhashKey&) = default;
  ~GhashKey() { secure_wipe(table_.data(), sizeof(table_)); }

  // Horner over the 16 bytes, last byte first: z = z * x^8 + byte * H.
  Block128 multiply(const Block128& x) const noexcept {
    Block128 z{};
    for (int i = 15; i >= 0; --i) {
      std::uint8_t byte = i < 8 ? static_cast<std::uint8_t>(x.hi >> (56 - 8 * i))
                                : static_cast<std::uint8_t>(x.lo >> (56 - 8 * (i - 8)));
      std::uint8_t rem = static_cast<std::uint8_t>(z.lo);
      z.lo = (z.lo >> 8) | (z.hi << 56);
      z.hi = (z.hi >> 8) ^ (std::uint64_t{kReduce8[rem]} << 48);
      z ^= table_[byte];
    }
    return z;
  }

 private:
  std::array<Block128, 256> table_{};
};

class Ghash {
 public:
  explicit Ghash(const GhashKey& key) noexcept : key_(key) {}

  // Absorbs `data`, zero-padding a trailing partial block.
  void update_padded(ByteView data) noexcept {
    std::size_t i = 0;
    for (; i + 16 <= data.size(); i += 16) absorb(load_block(data.data() + i));
    if (i < data.size()) {
      std::uint8_t last[16] = {};
      std::memcpy(last, data.data() + i, data.size() - i);
      absorb(load_block(last));
    }
  }

  void update_lengths(std::uint64_t aad_bytes, std::uint64_t text_bytes) noexcept {
    absorb({aad_bytes * 8, text_bytes * 8});
  }

  Block128 digest() const noexcept { return acc_; }

 private:
  void absorb(Block128 block) noexcept {
    block ^= acc_;
    acc_ = key_.multiply(block);
  }

  const GhashKey& key_;
  Block128 acc_{};
};

}  // namespace detail

/// Keyed AES-128-GCM context. Key expansion and the GHASH table are built
/// once in the constructor and reused for every call.
class Aes128Gcm {
 public:
  static constexpr std::size_t kKeySize = 16;
  static constexpr std::size_t kNonceSize = 12;
  static constexpr std::size_t kTagSize = 16;

  using Nonce = std::array<std::uint8_t, kNonceSize>;
  using Tag = std::array<std::uint8_t, kTagSize>;

  explicit Aes128Gcm(std::span<const std::uint8_t, kKeySize> key) noexcept
      : aes_(key), ghash_(hash_key(aes_).data()) {}

  /// Encrypts `plaintext` into `ciphertext` (same length) and returns the tag.
  Tag encrypt(const Nonce& nonce, ByteView aad, ByteView plaintext,
              std::span<std::uint8_t> ciphertext) const noexcept {
    ctr_xor(nonce, plaintext, ciphertext);
    return compute_tag(nonce, aad, {ciphertext.data(), plaintext.size()});
  }

  /// Verifies the tag over (aad, ciphertext) before producing any plaintext.
  /// On failure `plaintext` is left untouched and false is returned.
  bool decrypt(const Nonce& nonce, ByteView aad, ByteView ciphertext,
               const Tag& tag, std::span<std::uint8_t> plaintext) const noexcept {
    Tag expected = compute_tag(nonce, aad, ciphertext);
    bool ok = constant_time_equal(expected, tag);
    secure_wipe(expected.data(), expected.size());
    if (!ok) return false;
    ctr_xor(nonce, ciphertext, plaintext);
    return true;
  }

  Bytes seal(const Nonce& nonce, ByteView aad, ByteView plaintext, Tag& tag) const {
    Bytes out(plaintext.size());
    tag = encrypt(nonce, aad, plaintext, out);
    return out;
  }

  std::optional<Bytes> open(const Nonce& nonce, ByteView aad, ByteView ciphertext,
                            const Tag& tag) const {
    Bytes out(ciphertext.size());
    if (!decrypt(nonce, aad, ciphertext, tag, out)) return std::nullopt;
    return out;
  }

 private:
  static std::array<std::uint8_t, 16> hash_key(const Aes128& aes) noexcept {
    std::array<std::uint8_t, 16> h{};
    aes.encrypt_block(h.data(), h.data());
    return h;
  }

  static void initial_counter(const Nonce& nonce, std::uint8_t* j0) noexcept {
    std::memcpy(j0, nonce.data(), kNonceSize);
    put_u32_be(j0 + 12, 1);
  }

  void ctr_xor(const Nonce& nonce, ByteView in, std::span<std::uint8_t> out) const noexcept {
    std::uint8_t counter[16];
    std::uint8_t stream[16];
    initial_counter(nonce, counter);
    std::uint32_t ctr = 1;
    std::size_t i = 0;
    for (; i + 16 <= in.size(); i += 16) {
      put_u32_be(counter + 12, ++ctr);
      aes_.encrypt_block(counter, stream);
      std::uint64_t a, b, k0, k1;
      std::memcpy(&a, in.data() + i, 8);
      std::memcpy(&b, in.data() + i + 8, 8);
      std::memcpy(&k0, stream, 8);
      std::memcpy(&k1, stream + 8, 8);
      a ^= k0;
      b ^= k1;
      std::memcpy(out.data() + i, &a, 8);
      std::memcpy(out.data() + i + 8, &b, 8);
    }
    if (i < in.size()) {
      put_u32_be(counter + 12, ++ctr);
      aes_.encrypt_block(counter, stream);
      for (std::size_t j = 0; i + j < in.size(); ++j)
        out[i + j] = in[i + j] ^ stream[j];
    }
    secure_wipe(stream, sizeof(stream));
  }

  Tag compute_tag(const Nonce& nonce, ByteView aad, ByteView ciphertext) const noexcept {
    detail::Ghash gh(ghash_);
    gh.update_padded(aad);
    gh.update_padded(ciphertext);
    gh.update_lengths(aad.size(), ciphertext.size());
    Tag tag{};
    std::uint8_t j0[16];
    initial_counter(nonce, j0);
    std::uint8_t mask[16];
    aes_.encrypt_block(j0, mask);
    detail::store_block(gh.digest(), tag.data());
    for (std::size_t i = 0; i < kTagSize; ++i) tag[i] ^= mask[i];
    secure_wipe(mask, sizeof(mask));
    return tag;
  }

  Aes128 aes_;
  detail::GhashKey ghash_;
};

}  // namespace securemail::kernel
