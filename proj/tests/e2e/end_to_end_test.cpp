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

#include "securemail/client/client.hpp"
#include "securemail/efail/strategy.hpp"
#include "securemail/mail/notification.hpp"
#include "support/deployment.hpp"

namespace securemail {
namespace {

using testing::count_occurrences;
using testing::read_file;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_failure;
}

struct Received {
  std::string to;
  std::string html;
  std::string credential;
};

std::vector<Received> received(const testing::Deployment& d) {
  std::vector<Received> out;
  for (const auto& path : d.outbox_files()) {
    std::string eml = read_file(path);
    Received r;
    auto to = eml.find("To: ");
    r.to = eml.substr(to + 4, eml.find("\r\n", to) - to - 4);
    r.html = mail::extract_attachment_html(eml);
    r.credential = client::credential_from_text(eml).value_or("");
    out.push_back(std::move(r));
  }
  return out;
}

kernel::SecureMessage sample_message() {
  return {"Quarterly figures", "Please find the figures attached.",
          {{"figures.csv", to_bytes("q1,q2\n10,20\n")}, {"scan.bin", Bytes(70'000, 0x5a)}}};
}

TEST(EndToEndTest, EveryRecipientReadsTheSameMessage) {
  testing::Deployment d;
  auto msg = sample_message();
  auto sent = client::send_flow(d.key_url(), d.mail_url(), msg, "alice@example.org",
                                {"bob@example.org", "carol@example.org", "dave@example.org"});
  EXPECT_EQ(sent.dispatched, 3u);
  EXPECT_EQ(sent.credentials.size(), 3u);

  auto inbox = received(d);
  ASSERT_EQ(inbox.size(), 3u);
  for (const auto& r : inbox) {
    EXPECT_EQ(r.credential, sent.credentials.at(r.to));
    auto view = client::read_flow(r.html, r.credential);
    EXPECT_EQ(view.message_id, sent.message_id);
    EXPECT_EQ(view.message, msg);
  }

  auto audit = d.key_service().audit(sent.message_id, sent.sender_token);
  EXPECT_EQ(audit.size(), 3u);
}

TEST(EndToEndTest, WrongCredentialIsDenied) {
  testing::Deployment d;
  auto a = client::send_flow(d.key_url(), d.mail_url(), sample_message(), "alice", {"bob"});
  auto b = client::send_flow(d.key_url(), d.mail_url(), sample_message(), "alice", {"carol"});
  auto inbox = received(d);
  ASSERT_EQ(inbox.size(), 2u);
  const auto& bob = inbox[0].to == "bob" ? inbox[0] : inbox[1];
  EXPECT_EQ(code_of([&] { client::read_flow(bob.html, b.credentials.at("carol")); }),
            ErrorCode::access_denied);
  EXPECT_EQ(code_of([&] { client::read_flow(bob.html, "not-a-token"); }),
            ErrorCode::access_denied);
  EXPECT_EQ(code_of([&] { client::read_flow(bob.html, a.sender_token); }),
            ErrorCode::access_denied);
}

TEST(EndToEndTest, OversizeAttachmentIsRejectedBeforeAnyRequest) {
  testing::Deployment d;
  kernel::SecureMessage msg{"s", "b", {{"big", Bytes(kernel::kMaxAttachmentBytes + 1)}}};
  EXPECT_EQ(code_of([&] { client::send_flow(d.key_url(), d.mail_url(), msg, "alice", {"bob"}); }),
            ErrorCode::attachment_too_large);
  EXPECT_TRUE(d.captured_requests().empty());
  EXPECT_EQ(d.key_service().store().size(), 0u);
}

// Replays harness mutations of a part inside the received attachment through
// the read flow. Nothing may decrypt.
TEST(EndToEndTest, TamperedAttachmentNeverYieldsContent) {
  testing::Deployment d;
  client::send_flow(d.key_url(), d.mail_url(), sample_message(), "alice", {"bob"});
  auto bob = received(d).at(0);
  auto enc = mail::parse_attachment(bob.html);
  const Bytes target = kernel::encode_envelope(enc.attachment_envelopes[0]);

  efail::PlanOptions opt;
  opt.sibling_ad = efail::associated_data_of(kernel::encode_envelope(enc.body_envelope));
  auto plan = efail::plan_sampled(target, opt, 60, 11);
  std::size_t rejected = 0;
  for (const auto& m : plan) {
    if (m.kind == efail::MutationKind::identity) continue;
    auto fields = mail::parse_attachment_fields(bob.html);
    Bytes mutated = efail::mutate(target, m);
    // Parts that still decode are re-framed field by field; the rest are
    // posted whole in place of the ciphertext.
    try {
      auto env = kernel::decode_envelope(mutated);
      fields["nonce_1"] = base64::encode_url(env.nonce);
      fields["adata_1"] = base64::encode_url(env.ad.serialize());
      fields["mac_1"] = base64::encode_url(env.tag);
      fields["ciphertext_1"] = base64::encode_url(env.ciphertext);
    } catch (const Error&) {
      fields["ciphertext_1"] = base64::encode_url(mutated);
    }
    auto html = mail::render_form_html(fields, mail::parse_form_action(bob.html));
    auto code = code_of([&] { client::read_flow(html, bob.credential); });
    EXPECT_TRUE(code == ErrorCode::authentication_failed || code == ErrorCode::malformed_envelope)
        << efail::describe(m) << " -> " << to_string(code);
    ++rejected;
  }
  EXPECT_EQ(rejected, 60u);
  EXPECT_EQ(client::read_flow(bob.html, bob.credential).message, sample_message());
}

TEST(EndToEndTest, PlaintextNeverReachesServerState) {
  const std::string sentinel = "SENTINEL-" + base64::encode_url(random_bytes(18));
  testing::Deployment d;
  kernel::SecureMessage msg{"subject " + sentinel, "body " + sentinel,
                            {{"notes-" + sentinel + ".txt", to_bytes("attachment " + sentinel)}}};
  client::send_flow(d.key_url(), d.mail_url(), msg, "alice", {"bob", "carol"});
  for (const auto& r : received(d)) client::read_flow(r.html, r.credential);

  for (const auto& path : d.state_files())
    EXPECT_EQ(count_occurrences(read_file(path), sentinel), 0u) << path;
  for (const auto& req : d.captured_requests())
    EXPECT_EQ(count_occurrences(req, sentinel), 0u) << req.substr(0, 80);
  EXPECT_FALSE(d.captured_requests().empty());
}

}  // namespace
}  // namespace securemail
