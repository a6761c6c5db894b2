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

// Persistence for the key service. Two stores share one interface: an
// in-memory map for tests and an append-only JSON-lines journal that is
// replayed on start-up.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "securemail/base64.hpp"
#include "securemail/error.hpp"
#include "securemail/kernel/message_key.hpp"

namespace securemail::keys {

struct FetchEvent {
  std::string recipient_id;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const FetchEvent&, const FetchEvent&) = default;
};

struct RecipientCredential {
  std::string recipient_id;
  std::string token;

  friend bool operator==(const RecipientCredential&, const RecipientCredential&) = default;
};

struct KeyRecord {
  std::string message_id;
  kernel::MessageKey key{"", {}};
  std::string sender_id;
  std::set<std::string> recipients;
  std::int64_t created_at_ms = 0;
  std::vector<FetchEvent> fetches;
  // Bearer secrets minted at registration.
  std::map<std::string, std::string> recipient_tokens;
  std::string sender_token;
};

class KeyStore {
 public:
  virtual ~KeyStore() = default;

  /// Atomically adds `record`; returns false if the message id is taken.
  virtual bool insert(const KeyRecord& record) = 0;
  virtual std::optional<KeyRecord> find(const std::string& message_id) const = 0;
  /// Appends a fetch, clamping its timestamp so the log never goes backwards.
  virtual FetchEvent append_fetch(const std::string& message_id, const std::string& recipient_id,
                                  std::int64_t timestamp_ms) = 0;
  virtual std::size_t size() const = 0;
};

class InMemoryKeyStore : public KeyStore {
 public:
  bool insert(const KeyRecord& record) override {
    std::lock_guard lock(mu_);
    return records_.try_emplace(record.message_id, record).second;
  }

  std::optional<KeyRecord> find(const std::string& message_id) const override {
    std::lock_guard lock(mu_);
    auto it = records_.find(message_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  FetchEvent append_fetch(const std::string& message_id, const std::string& recipient_id,
                          std::int64_t timestamp_ms) override {
    std::lock_guard lock(mu_);
    return append_locked(message_id, recipient_id, timestamp_ms);
  }

  std::size_t size() const override {
    std::lock_guard lock(mu_);
    return records_.size();
  }

 protected:
  FetchEvent append_locked(const std::string& message_id, const std::string& recipient_id,
                           std::int64_t timestamp_ms) {
    auto it = records_.find(message_id);
    if (it == records_.end()) throw Error(ErrorCode::not_found);
    auto& fetches = it->second.fetches;
    if (!fetches.empty()) timestamp_ms = std::max(timestamp_ms, fetches.back().timestamp_ms);
    fetches.push_back({recipient_id, timestamp_ms});
    return fetches.back();
  }

  mutable std::mutex mu_;
  std::map<std::string, KeyRecord> records_;
};

class FileKeyStore : public InMemoryKeyStore {
 public:
  explicit FileKeyStore(std::filesystem::path path) : path_(std::move(path)) {
    replay();
    out_.open(path_, std::ios::app);
    if (!out_) throw Error(ErrorCode::io_failure, "cannot open " + path_.string());
  }

  bool insert(const KeyRecord& record) override {
    std::lock_guard lock(mu_);
    if (records_.count(record.message_id)) return false;
    write(to_json(record));
    records_.emplace(record.message_id, record);
    return true;
  }

  FetchEvent append_fetch(const std::string& message_id, const std::string& recipient_id,
                          std::int64_t timestamp_ms) override {
    std::lock_guard lock(mu_);
    FetchEvent ev = append_locked(message_id, recipient_id, timestamp_ms);
    write({{"type", "fetch"},
           {"message_id", message_id},
           {"recipient_id", ev.recipient_id},
           {"timestamp_ms", ev.timestamp_ms}});
    return ev;
  }

 private:
  static nlohmann::json to_json(const KeyRecord& r) {
    return {{"type", "register"},
            {"message_id", r.message_id},
            {"key_id", r.key.key_id()},
            {"key_b64", base64::encode_url(r.key.material())},
            {"sender_id", r.sender_id},
            {"recipients", r.recipients},
            {"created_at_ms", r.created_at_ms},
            {"recipient_tokens", r.recipient_tokens},
            {"sender_token", r.sender_token}};
  }

  void write(const nlohmann::json& j) {
    out_ << j.dump() << '\n';
    out_.flush();
    if (!out_) throw Error(ErrorCode::io_failure, "journal write failed");
  }

  void replay() {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::io_failure, "corrupt journal line");
      if (j.at("type") == "register") {
        auto material = base64::decode_url(j.at("key_b64").get<std::string>());
        if (!material) throw Error(ErrorCode::io_failure, "corrupt key in journal");
        KeyRecord r{j.at("message_id"),
                    kernel::MessageKey::from_bytes(j.at("key_id"), *material),
                    j.at("sender_id"),
                    j.at("recipients").get<std::set<std::string>>(),
                    j.at("created_at_ms"),
                    {},
                    j.at("recipient_tokens").get<std::map<std::string, std::string>>(),
                    j.at("sender_token")};
        secure_wipe(material->data(), material->size());
        records_.emplace(r.message_id, std::move(r));
      } else {
        append_locked(j.at("message_id"), j.at("recipient_id"), j.at("timestamp_ms"));
      }
    }
  }

  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace securemail::keys
