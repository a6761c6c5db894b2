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

// Storage for ciphertext bundles held by the message service. Records carry
// envelopes and routing metadata only.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "securemail/error.hpp"
#include "securemail/kernel/envelope.hpp"

namespace securemail::mail {

enum class MessageStatus { stored, notified };

struct MessageRecord {
  std::string message_id;
  kernel::EncryptedMessage enc;
  std::string sender_id;
  std::vector<std::string> recipients;
  std::int64_t created_at_ms = 0;
  MessageStatus status = MessageStatus::stored;
  // Recipients whose notification has not been delivered yet.
  std::set<std::string> pending;
};

inline nlohmann::json to_json(const MessageRecord& r) {
  nlohmann::json attachments = nlohmann::json::array();
  for (const auto& e : r.enc.attachment_envelopes)
    attachments.push_back(kernel::encode_envelope_text(e));
  return {{"message_id", r.message_id},
          {"sender_id", r.sender_id},
          {"recipients", r.recipients},
          {"created_at_ms", r.created_at_ms},
          {"status", r.status == MessageStatus::stored ? "stored" : "notified"},
          {"pending", r.pending},
          {"body", kernel::encode_envelope_text(r.enc.body_envelope)},
          {"attachments", attachments}};
}

inline MessageRecord record_from_json(const nlohmann::json& j) {
  MessageRecord r;
  r.message_id = j.at("message_id");
  r.sender_id = j.at("sender_id");
  r.recipients = j.at("recipients").get<std::vector<std::string>>();
  r.created_at_ms = j.at("created_at_ms");
  r.status = j.at("status") == "notified" ? MessageStatus::notified : MessageStatus::stored;
  r.pending = j.at("pending").get<std::set<std::string>>();
  r.enc.message_id = r.message_id;
  r.enc.body_envelope = kernel::decode_envelope_text(j.at("body").get<std::string>());
  for (const auto& a : j.at("attachments"))
    r.enc.attachment_envelopes.push_back(kernel::decode_envelope_text(a.get<std::string>()));
  return r;
}

class MessageStore {
 public:
  using Mutation = std::function<void(MessageRecord&)>;

  virtual ~MessageStore() = default;
  /// Atomically adds `record`; false if the id is taken.
  virtual bool insert(const MessageRecord& record) = 0;
  virtual std::optional<MessageRecord> find(const std::string& message_id) const = 0;
  /// Applies `mutate` under the store lock; false if the id is unknown.
  virtual bool update(const std::string& message_id, const Mutation& mutate) = 0;
  virtual std::size_t size() const = 0;
};

class InMemoryMessageStore : public MessageStore {
 public:
  bool insert(const MessageRecord& record) override {
    std::lock_guard lock(mu_);
    if (!records_.try_emplace(record.message_id, record).second) return false;
    persist(record);
    return true;
  }

  std::optional<MessageRecord> find(const std::string& message_id) const override {
    std::lock_guard lock(mu_);
    auto it = records_.find(message_id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  bool update(const std::string& message_id, const Mutation& mutate) override {
    std::lock_guard lock(mu_);
    auto it = records_.find(message_id);
    if (it == records_.end()) return false;
    MessageRecord copy = it->second;
    mutate(copy);
    persist(copy);
    it->second = std::move(copy);
    return true;
  }

  std::size_t size() const override {
    std::lock_guard lock(mu_);
    return records_.size();
  }

 protected:
  virtual void persist(const MessageRecord&) {}

  mutable std::mutex mu_;
  std::map<std::string, MessageRecord> records_;
};

/// One JSON document per message, rewritten atomically on every change.
class DirectoryMessageStore : public InMemoryMessageStore {
 public:
  explicit DirectoryMessageStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (entry.path().extension() != ".json") continue;
      std::ifstream in(entry.path());
      auto j = nlohmann::json::parse(in, nullptr, false);
      if (j.is_discarded()) throw Error(ErrorCode::io_failure, "corrupt " + entry.path().string());
      auto r = record_from_json(j);
      records_.emplace(r.message_id, std::move(r));
    }
  }

 protected:
  void persist(const MessageRecord& r) override {
    auto tmp = dir_ / (r.message_id + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << to_json(r).dump();
      if (!out) throw Error(ErrorCode::io_failure, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, dir_ / (r.message_id + ".json"), ec);
    if (ec) throw Error(ErrorCode::io_failure, ec.message());
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace securemail::mail
