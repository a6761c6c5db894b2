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

// The trusted key service: the only component that ever holds message keys.
// It stores one key per message, mints one bearer credential per recipient
// (plus one for the sender's audit access) and releases the key only to the
// holder of a minted credential.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "securemail/base64.hpp"
#include "securemail/error.hpp"
#include "securemail/keys/key_store.hpp"
#include "securemail/random.hpp"
#include "securemail/clock.hpp"

namespace securemail::keys {

inline constexpr std::size_t kTokenBytes = 32;

inline std::string mint_token() {
  std::uint8_t raw[kTokenBytes];
  fill_random(raw);
  std::string token = base64::encode_url(raw);
  secure_wipe(raw, sizeof(raw));
  return token;
}

struct Registration {
  std::vector<RecipientCredential> credentials;
  std::string sender_token;
};

class KeyService {
 public:
  using Clock = std::function<std::int64_t()>;

  explicit KeyService(KeyStore& store, Clock clock = now_ms)
      : store_(store), clock_(std::move(clock)) {}

  Registration register_key(const std::string& message_id, const kernel::MessageKey& key,
                            const std::string& sender_id,
                            const std::vector<std::string>& recipients) {
    if (message_id.empty() || sender_id.empty())
      throw Error(ErrorCode::invalid_request, "message_id and sender_id are required");
    std::set<std::string> unique(recipients.begin(), recipients.end());
    unique.erase("");
    if (unique.empty()) throw Error(ErrorCode::empty_recipients);

    KeyRecord record{message_id, key, sender_id, unique, clock_(), {}, {}, mint_token()};
    Registration reg;
    for (const auto& r : unique) {
      std::string token = mint_token();
      record.recipient_tokens.emplace(r, token);
      reg.credentials.push_back({r, token});
    }
    reg.sender_token = record.sender_token;
    if (!store_.insert(record)) throw Error(ErrorCode::duplicate_message_id);
    return reg;
  }

  /// Releases the key to whichever recipient `token` was minted for.
  kernel::MessageKey fetch_key(const std::string& message_id, const std::string& token) {
    auto record = store_.find(message_id);
    if (!record) throw Error(ErrorCode::not_found);
    auto recipient = owner_of(*record, token);
    if (!recipient) throw Error(ErrorCode::access_denied);
    store_.append_fetch(message_id, *recipient, clock_());
    return record->key;
  }

  /// As above, additionally requiring the credential's recipient to match.
  kernel::MessageKey fetch_key(const std::string& message_id,
                               const RecipientCredential& credential) {
    auto record = store_.find(message_id);
    if (!record) throw Error(ErrorCode::not_found);
    auto recipient = owner_of(*record, credential.token);
    if (!recipient || *recipient != credential.recipient_id)
      throw Error(ErrorCode::access_denied);
    store_.append_fetch(message_id, *recipient, clock_());
    return record->key;
  }

  /// Fetch history, visible to the registering sender only. Unknown ids are
  /// reported as AccessDenied as well.
  std::vector<FetchEvent> audit(const std::string& message_id, const std::string& sender_token) {
    auto record = store_.find(message_id);
    if (!record || !constant_time_equal(as_bytes(record->sender_token), as_bytes(sender_token)))
      throw Error(ErrorCode::access_denied);
    return record->fetches;
  }

  const KeyStore& store() const noexcept { return store_; }

 private:
  static std::optional<std::string> owner_of(const KeyRecord& record, const std::string& token) {
    std::optional<std::string> owner;
    for (const auto& [recipient, minted] : record.recipient_tokens)
      if (constant_time_equal(as_bytes(minted), as_bytes(token))) owner = recipient;
    return owner;
  }

  KeyStore& store_;
  Clock clock_;
};

}  // namespace securemail::keys
