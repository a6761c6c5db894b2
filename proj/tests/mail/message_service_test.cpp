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

#include <fstream>
#include <thread>

#include "securemail/kernel/kernel.hpp"
#include "securemail/mail/message_service.hpp"
#include "support/local_server.hpp"

namespace securemail::mail {
namespace {

kernel::EncryptedMessage make_bundle(const std::string& id, std::size_t attachments,
                                     const std::string& sender = "alice") {
  kernel::SecureMessage msg{"subject", "body text", {}};
  for (std::size_t i = 0; i < attachments; ++i)
    msg.attachments.push_back({"a" + std::to_string(i), Bytes(50 + i, 1)});
  return kernel::encrypt_message(msg, kernel::generate_key(), id, sender);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_failure;
}

class RecordingTransport : public MailTransport {
 public:
  void deliver(const NotificationEmail& mail) override {
    std::lock_guard lock(mu);
    if (fail_for.count(mail.to)) throw Error(ErrorCode::transport_failure, "injected");
    sent.push_back(mail);
  }
  std::mutex mu;
  std::set<std::string> fail_for;
  std::vector<NotificationEmail> sent;
};

class MessageServiceTest : public ::testing::Test {
 protected:
  InMemoryMessageStore store_;
  RecordingTransport transport_;
  MessageService service_{store_, transport_, {"https://mail.example", "https://keys.example"}};
};

TEST_F(MessageServiceTest, SubmitStoresOneRecordRegardlessOfRecipients) {
  service_.submit_message(make_bundle("m1", 1), {"bob", "carol", "dave"}, "alice");
  EXPECT_EQ(store_.size(), 1u);
  auto rec = store_.find("m1");
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->recipients.size(), 3u);
  EXPECT_EQ(rec->status, MessageStatus::stored);
}

TEST_F(MessageServiceTest, SubmitErrors) {
  auto bundle = make_bundle("m1", 0);
  service_.submit_message(bundle, {"bob"}, "alice");
  EXPECT_EQ(code_of([&] { service_.submit_message(bundle, {"bob"}, "alice"); }),
            ErrorCode::duplicate_message_id);
  EXPECT_EQ(code_of([&] { service_.submit_message(make_bundle("m2", 0), {}, "alice"); }),
            ErrorCode::empty_recipients);
  EXPECT_EQ(code_of([&] { service_.submit_message(make_bundle("m3", 0), {"bob"}, "mallory"); }),
            ErrorCode::malformed_envelope);
  EXPECT_EQ(code_of([&] { service_.submit_message(make_bundle("../x", 0), {"bob"}, "alice"); }),
            ErrorCode::malformed_envelope);
  auto swapped = make_bundle("m4", 2);
  std::swap(swapped.attachment_envelopes[0], swapped.attachment_envelopes[1]);
  EXPECT_EQ(code_of([&] { service_.submit_message(swapped, {"bob"}, "alice"); }),
            ErrorCode::malformed_envelope);
  EXPECT_EQ(store_.size(), 1u);
}

TEST_F(MessageServiceTest, TruncatedEnvelopeOnTheWireStoresNothing) {
  auto bundle = make_bundle("m1", 1);
  std::string body = kernel::encode_envelope_text(bundle.body_envelope);
  Bytes att = kernel::encode_envelope(bundle.attachment_envelopes[0]);
  att.resize(20);  // cut inside the associated data
  EXPECT_EQ(code_of([&] {
              service_.submit_encoded("m1", body, {base64::encode_url(att)}, {"bob"}, "alice");
            }),
            ErrorCode::malformed_envelope);
  EXPECT_EQ(store_.size(), 0u);
}

TEST_F(MessageServiceTest, AttachmentHasIndexedFieldsAndRoundTrips) {
  auto bundle = make_bundle("m1", 2);
  service_.submit_message(bundle, {"bob"}, "alice");
  auto att = service_.render_attachment("m1");
  auto fields = parse_attachment_fields(att.html);
  for (int i = 0; i < 3; ++i)
    for (const char* f : {"ciphertext_", "mac_", "adata_"})
      EXPECT_TRUE(fields.count(f + std::to_string(i))) << f << i;
  EXPECT_EQ(fields.at("message_id"), "m1");
  EXPECT_EQ(parse_form_action(att.html), "https://mail.example/read");
  EXPECT_EQ(parse_attachment(att.html), bundle);
  EXPECT_EQ(code_of([&] { service_.render_attachment("nope"); }), ErrorCode::not_found);
}

TEST_F(MessageServiceTest, NotifyOncePerRecipientThenIdempotent) {
  service_.submit_message(make_bundle("m1", 0), {"bob", "carol", "dave"}, "alice");
  auto first = service_.notify_recipients("m1", {{"bob", "tok-b"}});
  EXPECT_EQ(first.dispatched, 3u);
  EXPECT_TRUE(first.failures.empty());
  EXPECT_EQ(store_.find("m1")->status, MessageStatus::notified);
  EXPECT_EQ(service_.notify_recipients("m1").dispatched, 0u);
  EXPECT_EQ(transport_.sent.size(), 3u);

  for (const auto& mail : transport_.sent) {
    EXPECT_EQ(mail.subject, kNotificationSubject);
    bool has_token = mail.body_text.find("#credential=tok-b") != std::string::npos;
    EXPECT_EQ(has_token, mail.to == "bob");
    EXPECT_NE(mail.body_text.find("https://mail.example/messages/m1/attachment"),
              std::string::npos);
  }
  EXPECT_EQ(code_of([&] { service_.notify_recipients("nope"); }), ErrorCode::not_found);
}

TEST_F(MessageServiceTest, PartialTransportFailureIsReportedAndRetried) {
  service_.submit_message(make_bundle("m1", 0), {"r1", "r2", "r3"}, "alice");
  transport_.fail_for = {"r2"};
  auto result = service_.notify_recipients("m1");
  EXPECT_EQ(result.dispatched, 2u);
  ASSERT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(result.failures[0].recipient, "r2");
  EXPECT_EQ(store_.find("m1")->status, MessageStatus::stored);

  transport_.fail_for.clear();
  auto retry = service_.notify_recipients("m1");
  EXPECT_EQ(retry.dispatched, 1u);
  EXPECT_EQ(store_.find("m1")->status, MessageStatus::notified);
  EXPECT_EQ(transport_.sent.size(), 3u);
}

TEST_F(MessageServiceTest, ConcurrentNotifyDispatchesEachRecipientOnce) {
  std::vector<std::string> recipients;
  for (int i = 0; i < 20; ++i) recipients.push_back("r" + std::to_string(i));
  service_.submit_message(make_bundle("m1", 0), recipients, "alice");
  std::atomic<std::size_t> total{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i)
    threads.emplace_back([&] { total += service_.notify_recipients("m1").dispatched; });
  for (auto& t : threads) t.join();
  EXPECT_EQ(total.load(), 20u);
  EXPECT_EQ(transport_.sent.size(), 20u);
}

TEST_F(MessageServiceTest, ReadingPageEmbedsPayloadVerbatim) {
  auto bundle = make_bundle("m1", 1);
  auto fields = fields_from_message(bundle);
  auto page = service_.serve_reading_page(fields);
  EXPECT_EQ(page.status, 200);
  EXPECT_NE(page.html.find("/static/kernel.js"), std::string::npos);
  EXPECT_NE(page.html.find("data-key-service=\"https://keys.example\""), std::string::npos);
  for (const auto& [name, value] : fields) EXPECT_NE(page.html.find(value), std::string::npos);
}

TEST_F(MessageServiceTest, ReadingPageRejectsCorruptBase64WithoutEcho) {
  auto fields = fields_from_message(make_bundle("m1", 0));
  fields["ciphertext_0"] = "!!corrupt-" + fields["ciphertext_0"];
  auto page = service_.serve_reading_page(fields);
  EXPECT_EQ(page.status, 400);
  EXPECT_EQ(page.html.find("corrupt"), std::string::npos);
  EXPECT_EQ(page.html.find(fields["mac_0"]), std::string::npos);

  auto missing = fields_from_message(make_bundle("m1", 0));
  missing.erase("mac_0");
  EXPECT_EQ(service_.serve_reading_page(missing).status, 400);
}

TEST(AttachmentFormatTest, ParseRejectsBrokenFields) {
  auto bundle = make_bundle("m1", 1);
  auto fields = fields_from_message(bundle);
  auto code = [&](FormFields f) { return code_of([&] { message_from_fields(f); }); };

  auto f = fields;
  f["parts"] = "3";
  EXPECT_EQ(code(f), ErrorCode::malformed_envelope);
  f = fields;
  f["version_1"] = "2";
  EXPECT_EQ(code(f), ErrorCode::unsupported_version);
  f = fields;
  f["nonce_0"] = base64::encode_url(Bytes(11));
  EXPECT_EQ(code(f), ErrorCode::malformed_envelope);
  f = fields;
  f["message_id"] = "other";
  EXPECT_EQ(code(f), ErrorCode::malformed_envelope);
  f = fields;
  f["parts"] = "1x";
  EXPECT_EQ(code(f), ErrorCode::malformed_envelope);
}

TEST(AttachmentFormatTest, HtmlEscapingRoundTrips) {
  std::string nasty = "a\"b<c>&d'e";
  EXPECT_EQ(html_unescape(html_escape(nasty)), nasty);
}

TEST(NotificationTest, Rfc822CarriesAttachmentAsBase64) {
  auto att = render_attachment_html(make_bundle("m1", 0), "https://x/read");
  NotificationEmail mail{"bob@example.org", std::string(kNotificationSubject), "hello\r\n", att};
  auto text = to_rfc822(mail, 0);
  EXPECT_NE(text.find("To: bob@example.org\r\n"), std::string::npos);
  EXPECT_NE(text.find("Date: Thu, 01 Jan 1970 00:00:00 +0000"), std::string::npos);
  EXPECT_NE(text.find("filename=\"secure-message.html\""), std::string::npos);
  EXPECT_EQ(extract_attachment_html(text), att.html);
}

TEST(OutboxTransportTest, WritesOneFilePerNotification) {
  testing::TempDir dir;
  OutboxTransport outbox(dir.path() / "outbox");
  InMemoryMessageStore store;
  MessageService svc(store, outbox);
  svc.submit_message(make_bundle("m1", 0), {"a@x", "b@x", "c@x"}, "alice");
  EXPECT_EQ(svc.notify_recipients("m1").dispatched, 3u);
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path() / "outbox")) {
    EXPECT_EQ(e.path().extension(), ".eml");
    ++files;
  }
  EXPECT_EQ(files, 3u);
}

TEST(DirectoryMessageStoreTest, PersistsAndReloads) {
  testing::TempDir dir;
  auto bundle = make_bundle("m1", 2);
  {
    DirectoryMessageStore store(dir.path());
    RecordingTransport t;
    MessageService svc(store, t);
    svc.submit_message(bundle, {"bob", "carol"}, "alice");
    svc.notify_recipients("m1");
  }
  DirectoryMessageStore reopened(dir.path());
  auto rec = reopened.find("m1");
  ASSERT_TRUE(rec);
  EXPECT_EQ(rec->enc, bundle);
  EXPECT_EQ(rec->status, MessageStatus::notified);
  EXPECT_EQ(rec->recipients, (std::vector<std::string>{"bob", "carol"}));
}

// Ciphertext storage does not grow with the recipient count.
TEST(DirectoryMessageStoreTest, StorageIndependentOfRecipientCount) {
  auto bundle = make_bundle("m1", 1);
  auto stored_envelope_bytes = [&](std::size_t n) {
    testing::TempDir dir;
    DirectoryMessageStore store(dir.path());
    RecordingTransport t;
    MessageService svc(store, t);
    std::vector<std::string> rs;
    for (std::size_t i = 0; i < n; ++i) rs.push_back("r" + std::to_string(i));
    svc.submit_message(bundle, rs, "alice");
    std::ifstream in(dir.path() / "m1.json");
    auto j = nlohmann::json::parse(in);
    std::size_t bytes = j["body"].get<std::string>().size();
    for (const auto& a : j["attachments"]) bytes += a.get<std::string>().size();
    return bytes;
  };
  EXPECT_EQ(stored_envelope_bytes(1), stored_envelope_bytes(5));
}

}  // namespace
}  // namespace securemail::mail
