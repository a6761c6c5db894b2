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

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "securemail/bytes.hpp"
#include "securemail/error.hpp"

namespace securemail::kernel {

/// The single per-message secret shared by every recipient of a message.
/// Material is wiped on destruction and is never printed by the library.
class MessageKey {
 public:
  static constexpr std::size_t kSize = 16;
  using Material = std::array<std::uint8_t, kSize>;

  MessageKey(std::string key_id, const Material& material)
      : key_id_(std::move(key_id)), material_(material) {}

  /// Throws InvalidKey unless `material` is exactly 16 bytes.
  static MessageKey from_bytes(std::string key_id, ByteView material) {
    if (material.size() != kSize)
      throw Error(ErrorCode::invalid_key, "key material must be 16 bytes");
    Material m{};
    std::copy(material.begin(), material.end(), m.begin());
    MessageKey key(std::move(key_id), m);
    secure_wipe(m.data(), m.size());
    return key;
  }

  MessageKey(const MessageKey&) = default;
  MessageKey& operator=(const MessageKey&) = default;
  ~MessageKey() { secure_wipe(material_.data(), material_.size()); }

  const std::string& key_id() const noexcept { return key_id_; }
  std::span<const std::uint8_t, kSize> material() const noexcept { return material_; }

  friend bool operator==(const MessageKey& a, const MessageKey& b) noexcept {
    return a.key_id_ == b.key_id_ && constant_time_equal(a.material_, b.material_);
  }

 private:
  std::string key_id_;
  Material material_;
};

}  // namespace securemail::kernel
