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

// The untrusted message service. It accepts sealed bundles, renders the HTML
// attachment, sends notifications and serves the page that boots the client.
// It has no access to keys: only the key-free envelope codec is linked in,
// so it can neither seal nor open anything.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "securemail/clock.hpp"
#include "securemail/error.hpp"
#include "securemail/kernel/envelope.hpp"
#include "securemail/mail/attachment.hpp"
#include "securemail/mail/message_store.hpp"
#include "securemail/mail/notification.hpp"

namespace securemail::mail {

struct MessageServiceConfig {
  /// Externally visible origin; used for the attachment's form action and
  /// the reading link in notifications.
  std::string public_base_url = "http://localhost:8080";
  /// Handed to the client bootstrap so the page knows where to fetch keys.
  std::string key_service_url = "http://localhost:8081";
  std::string static_prefix = "/static";
};

struct NotifyFailure {
  std::string recipient;
  std::string reason;
};

struct NotifyResult {
  std::size_t dispatched = 0;
  std::vector<NotifyFailure> failures;
};

struct ReadingPage {
  int status = 200;
  std::string html;
};

class MessageService {
 public:
  MessageService(MessageStore& store, MailTransport& transport, MessageServiceConfig config = {},
                 std::function<std::int64_t()> clock = now_ms)
      : store_(store), transport_(transport), config_(std::move(config)), clock_(std::move(clock)) {}

  std::string submit_message(const kernel::EncryptedMessage& enc,
                             const std::vector<std::string>& recipients,
                             const std::string& sender_id) {
    if (!is_valid_message_id(enc.message_id))
      throw Error(ErrorCode::malformed_envelope, "invalid message id");
    if (!kernel::parts_consistent(enc) || enc.body_envelope.ad.sender_id != sender_id)
      throw Error(ErrorCode::malformed_envelope, "parts disagree with associated data");
    for (std::size_t i = 0; i < enc.part_count(); ++i)
      if (enc.part(i).version != kernel::kEnvelopeVersion)
        throw Error(ErrorCode::unsupported_version);

    MessageRecord record;
    record.message_id = enc.message_id;
    record.enc = enc;
    record.sender_id = sender_id;
    for (const auto& r : recipients)
      if (!r.empty() && std::find(record.recipients.begin(), record.recipients.end(), r) ==
                            record.recipients.end())
        record.recipients.push_back(r);
    if (record.recipients.empty()) throw Error(ErrorCode::empty_recipients);
    record.pending.insert(record.recipients.begin(), record.recipients.end());
    record.created_at_ms = clock_();
    if (!store_.insert(record)) throw Error(ErrorCode::duplicate_message_id);
    return record.message_id;
  }

  /// Wire form of submit_message: envelopes as base64url text.
  std::string submit_encoded(const std::string& message_id, const std::string& body,
                             const std::vector<std::string>& attachments,
                             const std::vector<std::string>& recipients,
                             const std::string& sender_id) {
    kernel::EncryptedMessage enc;
    enc.message_id = message_id;
    enc.body_envelope = kernel::decode_envelope_text(body);
    for (const auto& a : attachments)
      enc.attachment_envelopes.push_back(kernel::decode_envelope_text(a));
    return submit_message(enc, recipients, sender_id);
  }

  HtmlAttachment render_attachment(const std::string& message_id) const {
    auto record = store_.find(message_id);
    if (!record) throw Error(ErrorCode::not_found);
    return render_attachment_html(record->enc, config_.public_base_url + "/read");
  }

  /// Sends one notification per pending recipient. A recipient is claimed
  /// before delivery, so concurrent calls never notify anyone twice; failed
  /// deliveries go back to pending for a later call. `reader_tokens` are
  /// placed in each recipient's reading link and are not stored.
  NotifyResult notify_recipients(const std::string& message_id,
                                 const std::map<std::string, std::string>& reader_tokens = {}) {
    std::set<std::string> claimed;
    std::string sender;
    if (!store_.update(message_id, [&](MessageRecord& r) {
          claimed.swap(r.pending);
          sender = r.sender_id;
        }))
      throw Error(ErrorCode::not_found);

    NotifyResult result;
    if (claimed.empty()) return result;
    HtmlAttachment attachment = render_attachment(message_id);
    std::set<std::string> failed;
    for (const auto& recipient : claimed) {
      NotificationEmail mail{recipient, std::string(kNotificationSubject),
                             notification_body(message_id, sender, recipient, reader_tokens),
                             attachment};
      try {
        transport_.deliver(mail);
        ++result.dispatched;
      } catch (const Error& e) {
        failed.insert(recipient);
        result.failures.push_back({recipient, e.what()});
      }
    }
    store_.update(message_id, [&](MessageRecord& r) {
      r.pending.insert(failed.begin(), failed.end());
      if (r.pending.empty()) r.status = MessageStatus::notified;
    });
    return result;
  }

  /// Validates the posted bundle and returns the page that loads the
  /// client. The bundle is embedded exactly as posted; nothing is decrypted.
  ReadingPage serve_reading_page(const FormFields& posted) const {
    kernel::EncryptedMessage enc;
    try {
      enc = message_from_fields(posted);
    } catch (const Error&) {
      return {400, error_page()};
    }
    FormFields payload = fields_from_message(enc);
    for (const auto& [name, value] : posted)
      if (payload.count(name)) payload[name] = value;

    std::string json = nlohmann::json(payload).dump();
    std::string safe_json;
    for (char c : json) safe_json += c == '<' ? std::string("\\u003c") : std::string(1, c);

    std::string html;
    html +=
        "<!DOCTYPE html>\n"
        "<html lang=\"en\">\n"
        "<head>\n"
        "<meta charset=\"utf-8\">\n"
        "<title>Secure message</title>\n";
    html += "<script src=\"" + html_escape(config_.static_prefix) + "/kernel.js\" defer></script>\n";
    html += "<script src=\"" + html_escape(config_.static_prefix) + "/reader.js\" defer></script>\n";
    html += "</head>\n<body data-key-service=\"" + html_escape(config_.key_service_url) +
            "\" data-message-id=\"" + html_escape(enc.message_id) + "\">\n";
    html += "<main id=\"securemail-reader\"><p>Decrypting secure message...</p></main>\n";
    html += "<script type=\"application/json\" id=\"securemail-payload\">" + safe_json +
            "</script>\n";
    html += "</body>\n</html>\n";
    return {200, std::move(html)};
  }

  const MessageServiceConfig& config() const noexcept { return config_; }
  const MessageStore& store() const noexcept { return store_; }

 private:
  std::string notification_body(const std::string& message_id, const std::string& sender,
                                const std::string& recipient,
                                const std::map<std::string, std::string>& reader_tokens) const {
    std::string link = config_.public_base_url + "/messages/" + message_id + "/attachment";
    if (auto it = reader_tokens.find(recipient); it != reader_tokens.end())
      link += "#credential=" + it->second;
    return sender + " has sent you a secure message.\r\n\r\n"
           "Open the attached file " + std::string(kAttachmentFilename) +
           " in your browser to read it, or follow this link:\r\n" + link + "\r\n";
  }

  static std::string error_page() {
    return "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
           "<title>Secure message unavailable</title>\n</head>\n<body>\n"
           "<p>The secure message could not be loaded because the submitted data is "
           "malformed.</p>\n</body>\n</html>\n";
  }

  MessageStore& store_;
  MailTransport& transport_;
  MessageServiceConfig config_;
  std::function<std::int64_t()> clock_;
};

}  // namespace securemail::mail
