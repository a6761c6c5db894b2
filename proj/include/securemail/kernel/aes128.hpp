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

// Portable AES-128 forward cipher. Only encryption is needed: GCM runs the
// block cipher in counter mode for both directions.

#include <array>
#include <cstdint>
#include <span>

#include "securemail/bytes.hpp"

namespace securemail::kernel {

namespace detail {

constexpr std::uint8_t rotl8(std::uint8_t x, int s) {
  return static_cast<std::uint8_t>((x << s) | (x >> (8 - s)));
}

constexpr std::uint8_t xtime(std::uint8_t x) {
  return static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1b : 0x00));
}

// Walks GF(2^8)* with generator 3 and its inverse to derive each S-box entry
// from the multiplicative inverse plus the affine map.
constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> sbox{};
  std::uint8_t p = 1, q = 1;
  do {
    p = static_cast<std::uint8_t>(p ^ xtime(p));
    q = static_cast<std::uint8_t>(q ^ (q << 1));
    q = static_cast<std::uint8_t>(q ^ (q << 2));
    q = static_cast<std::uint8_t>(q ^ (q << 4));
    if (q & 0x80) q ^= 0x09;
    std::uint8_t x = static_cast<std::uint8_t>(
        q ^ rotl8(q, 1) ^ rotl8(q, 2) ^ rotl8(q, 3) ^ rotl8(q, 4));
    sbox[p] = static_cast<std::uint8_t>(x ^ 0x63);
  } while (p != 1);
  sbox[0] = 0x63;
  return sbox;
}

inline constexpr auto kSbox = make_sbox();

constexpr std::uint32_t rotr32(std::uint32_t x, int s) {
  return s == 0 ? x : (x >> s) | (x << (32 - s));
}

// T-table i is the combined SubBytes/MixColumns column rotated right by 8*i.
constexpr std::array<std::array<std::uint32_t, 256>, 4> make_te() {
  std::array<std::array<std::uint32_t, 256>, 4> te{};
  for (int i = 0; i < 256; ++i) {
    std::uint8_t s = kSbox[i];
    std::uint8_t s2 = xtime(s);
    std::uint8_t s3 = static_cast<std::uint8_t>(s2 ^ s);
    std::uint32_t w = (std::uint32_t{s2} << 24) | (std::uint32_t{s} << 16) |
                      (std::uint32_t{s} << 8) | std::uint32_t{s3};
    for (int t = 0; t < 4; ++t) te[t][i] = rotr32(w, 8 * t);
  }
  return te;
}

inline constexpr auto kTe = make_te();

}  // namespace detail

class Aes128 {
 public:
  static constexpr std::size_t kKeySize = 16;
  static constexpr std::size_t kBlockSize = 16;
  static constexpr int kRounds = 10;

  explicit Aes128(std::span<const std::uint8_t, kKeySize> key) noexcept {
    using detail::kSbox;
    static constexpr std::uint8_t kRcon[10] = {0x01, 0x02, 0x04, 0x08, 0x10,
                                               0x20, 0x40, 0x80, 0x1b, 0x36};
    for (int i = 0; i < 4; ++i) rk_[i] = get_u32_be(key.data() + 4 * i);
    for (int i = 4; i < 44; ++i) {
      std::uint32_t t = rk_[i - 1];
      if (i % 4 == 0) {
        t = (std::uint32_t{kSbox[(t >> 16) & 0xff]} << 24) |
            (std::uint32_t{kSbox[(t >> 8) & 0xff]} << 16) |
            (std::uint32_t{kSbox[t & 0xff]} << 8) |
            std::uint32_t{kSbox[t >> 24]};
        t ^= std::uint32_t{kRcon[i / 4 - 1]} << 24;
      }
      rk_[i] = rk_[i - 4] ^ t;
    }
  }

  Aes128(const Aes128&) = default;
  Aes128& operator=(const Aes128&) = default;
  ~Aes128() { secure_wipe(rk_.data(), sizeof(rk_)); }

  void encrypt_block(const std::uint8_t* in, std::uint8_t* out) const noexcept {
    using detail::kSbox;
    using detail::kTe;
    const std::uint32_t* rk = rk_.data();
    std::uint32_t s0 = get_u32_be(in) ^ rk[0];
    std::uint32_t s1 = get_u32_be(in + 4) ^ rk[1];
    std::uint32_t s2 = get_u32_be(in + 8) ^ rk[2];
    std::uint32_t s3 = get_u32_be(in + 12) ^ rk[3];
    for (int r = 1; r < kRounds; ++r) {
      rk += 4;
      std::uint32_t t0 = kTe[0][s0 >> 24] ^ kTe[1][(s1 >> 16) & 0xff] ^
                         kTe[2][(s2 >> 8) & 0xff] ^ kTe[3][s3 & 0xff] ^ rk[0];
      std::uint32_t t1 = kTe[0][s1 >> 24] ^ kTe[1][(s2 >> 16) & 0xff] ^
                         kTe[2][(s3 >> 8) & 0xff] ^ kTe[3][s0 & 0xff] ^ rk[1];
      std::uint32_t t2 = kTe[0][s2 >> 24] ^ kTe[1][(s3 >> 16) & 0xff] ^
                         kTe[2][(s0 >> 8) & 0xff] ^ kTe[3][s1 & 0xff] ^ rk[2];
      std::uint32_t t3 = kTe[0][s3 >> 24] ^ kTe[1][(s0 >> 16) & 0xff] ^
                         kTe[2][(s1 >> 8) & 0xff] ^ kTe[3][s2 & 0xff] ^ rk[3];
      s0 = t0;
      s1 = t1;
      s2 = t2;
      s3 = t3;
    }
    rk += 4;
    auto last = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c,
                    std::uint32_t d, std::uint32_t k) {
      return ((std::uint32_t{kSbox[a >> 24]} << 24) |
              (std::uint32_t{kSbox[(b >> 16) & 0xff]} << 16) |
              (std::uint32_t{kSbox[(c >> 8) & 0xff]} << 8) |
              std::uint32_t{kSbox[d & 0xff]}) ^
             k;
    };
    put_u32_be(out, last(s0, s1, s2, s3, rk[0]));
    put_u32_be(out + 4, last(s1, s2, s3, s0, rk[1]));
    put_u32_be(out + 8, last(s2, s3, s0, s1, rk[2]));
    put_u32_be(out + 12, last(s3, s0, s1, s2, rk[3]));
  }

 private:
  std::array<std::uint32_t, 44> rk_{};
};

}  // namespace securemail::kernel
