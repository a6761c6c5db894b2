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

#include <gtest/gtest.h>

#include <thread>

#include "securemail/kernel/kernel.hpp"
#include "securemail/keys/key_service.hpp"
#include "support/local_server.hpp"

namespace securemail::keys {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_failure;
}

TEST(KeyServiceTest, OneRecordAndOneCredentialPerRecipient) {
  InMemoryKeyStore store;
  KeyService svc(store);
  auto key = kernel::generate_key();
  auto reg = svc.register_key("m1", key, "alice", {"bob", "carol", "dave"});
  EXPECT_EQ(reg.credentials.size(), 3u);
  EXPECT_EQ(store.size(), 1u);
  EXPECT_FALSE(reg.sender_token.empty());
  for (const auto& c : reg.credentials) {
    EXPECT_GE(c.token.size(), 43u);  // 256 bits as base64url
    EXPECT_EQ(svc.fetch_key("m1", c), key);
  }
}

TEST(KeyServiceTest, DuplicateAndEmptyRegistrations) {
  InMemoryKeyStore store;
  KeyService svc(store);
  auto key = kernel::generate_key();
  svc.register_key("m1", key, "alice", {"bob"});
  EXPECT_EQ(code_of([&] { svc.register_key("m1", key, "alice", {"bob"}); }),
            ErrorCode::duplicate_message_id);
  EXPECT_EQ(code_of([&] { svc.register_key("m2", key, "alice", {}); }),
            ErrorCode::empty_recipients);
  EXPECT_EQ(store.size(), 1u);
}

// 3 messages x 3 recipients: every minted credential is tried against every
// message; exactly the minted (message, recipient, token) triples succeed.
TEST(KeyServiceTest, EntitlementSoundnessExhaustive) {
  InMemoryKeyStore store;
  KeyService svc(store);
  struct Minted {
    std::string message_id;
    RecipientCredential credential;
  };
  std::vector<Minted> minted;
  for (int m = 0; m < 3; ++m) {
    auto id = "m" + std::to_string(m);
    auto reg = svc.register_key(id, kernel::generate_key(), "alice", {"r0", "r1", "r2"});
    for (const auto& c : reg.credentials) minted.push_back({id, c});
  }
  ASSERT_EQ(minted.size(), 9u);
  for (int m = 0; m < 3; ++m) {
    auto id = "m" + std::to_string(m);
    for (const auto& cand : minted) {
      bool expect = cand.message_id == id;
      EXPECT_EQ(code_of([&] { svc.fetch_key(id, cand.credential); }) == ErrorCode::io_failure,
                expect);
      EXPECT_EQ(code_of([&] { svc.fetch_key(id, cand.credential.token); }) ==
                    ErrorCode::io_failure,
                expect);
      // Right token, claimed by a different recipient.
      RecipientCredential forged{cand.credential.recipient_id == "r0" ? "r1" : "r0",
                                 cand.credential.token};
      EXPECT_EQ(code_of([&] { svc.fetch_key(id, forged); }), ErrorCode::access_denied);
    }
  }
}

TEST(KeyServiceTest, FetchErrors) {
  InMemoryKeyStore store;
  KeyService svc(store);
  auto a = svc.register_key("a", kernel::generate_key(), "alice", {"bob"});
  svc.register_key("b", kernel::generate_key(), "alice", {"bob"});
  EXPECT_EQ(code_of([&] { svc.fetch_key("b", a.credentials[0]); }), ErrorCode::access_denied);
  EXPECT_EQ(code_of([&] { svc.fetch_key("zzz", a.credentials[0]); }), ErrorCode::not_found);
  EXPECT_EQ(code_of([&] { svc.fetch_key("a", ""); }), ErrorCode::access_denied);
}

TEST(KeyServiceTest, AuditLog) {
  InMemoryKeyStore store;
  std::int64_t t = 1000;
  KeyService svc(store, [&t] { return t; });
  auto reg = svc.register_key("m", kernel::generate_key(), "alice", {"bob", "carol"});
  svc.fetch_key("m", reg.credentials[0]);
  EXPECT_EQ(svc.audit("m", reg.sender_token).size(), 1u);

  t = 900;  // clock stepped backwards
  svc.fetch_key("m", reg.credentials[0]);
  auto log = svc.audit("m", reg.sender_token);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].recipient_id, log[1].recipient_id);
  EXPECT_LE(log[0].timestamp_ms, log[1].timestamp_ms);

  EXPECT_EQ(code_of([&] { svc.audit("m", reg.credentials[0].token); }), ErrorCode::access_denied);
  EXPECT_EQ(code_of([&] { svc.audit("nope", reg.sender_token); }), ErrorCode::access_denied);
}

TEST(KeyServiceTest, ConcurrentDuplicateRegistrationHasOneWinner) {
  InMemoryKeyStore store;
  KeyService svc(store);
  std::atomic<int> wins{0}, dups{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&] {
      try {
        svc.register_key("race", kernel::generate_key(), "alice", {"bob"});
        ++wins;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::duplicate_message_id) ++dups;
      }
    });
  for (auto& t : threads) t.join();
  EXPECT_EQ(wins.load(), 1);
  EXPECT_EQ(dups.load(), 7);
}

TEST(FileKeyStoreTest, JournalReplaysRecordsAndFetches) {
  testing::TempDir dir;
  auto path = dir.path() / "keys.jsonl";
  auto key = kernel::generate_key();
  Registration reg;
  {
    FileKeyStore store(path);
    KeyService svc(store);
    reg = svc.register_key("m", key, "alice", {"bob", "carol"});
    svc.fetch_key("m", reg.credentials[1]);
  }
  FileKeyStore reopened(path);
  KeyService svc(reopened);
  EXPECT_EQ(reopened.size(), 1u);
  EXPECT_EQ(svc.fetch_key("m", reg.credentials[0]), key);
  auto log = svc.audit("m", reg.sender_token);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].recipient_id, reg.credentials[1].recipient_id);
  EXPECT_FALSE(reopened.insert(*reopened.find("m")));
}

}  // namespace
}  // namespace securemail::keys
