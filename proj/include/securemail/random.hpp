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

#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "securemail/bytes.hpp"
#include "securemail/error.hpp"

namespace securemail {

#if defined(SECUREMAIL_TEST_HOOKS)
namespace testing {
/// Replaces the system entropy source while set. Returning false simulates a
/// failing source.
inline std::function<bool(std::span<std::uint8_t>)>& entropy_override() {
  static std::function<bool(std::span<std::uint8_t>)> hook;
  return hook;
}
}  // namespace testing
#endif

/// Fills `out` from the operating system CSPRNG (getentropy; in a browser
/// build this maps onto crypto.getRandomValues).
inline void fill_random(std::span<std::uint8_t> out) {
#if defined(SECUREMAIL_TEST_HOOKS)
  if (auto& hook = testing::entropy_override()) {
    if (!hook(out)) throw Error(ErrorCode::entropy_unavailable);
    return;
  }
#endif
  // getentropy is limited to 256 bytes per call.
  while (!out.empty()) {
    std::size_t n = std::min<std::size_t>(out.size(), 256);
    if (::getentropy(out.data(), n) != 0)
      throw Error(ErrorCode::entropy_unavailable);
    out = out.subspan(n);
  }
}

inline Bytes random_bytes(std::size_t n) {
  Bytes out(n);
  fill_random(out);
  return out;
}

/// RFC 4122 version 4 identifier, lowercase.
inline std::string make_uuid() {
  std::uint8_t b[16];
  fill_random(b);
  b[6] = static_cast<std::uint8_t>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<std::uint8_t>((b[8] & 0x3f) | 0x80);
  std::string hex = to_hex(b);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) +
         "-" + hex.substr(16, 4) + "-" + hex.substr(20);
}

inline bool is_uuid(std::string_view s) {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (c != '-') return false;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      return false;
    }
  }
  return true;
}

}  // namespace securemail
