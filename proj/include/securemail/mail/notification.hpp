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

// Notification emails and the transport that delivers them. The default
// transport writes RFC 822 files into an outbox directory instead of talking
// SMTP.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include "securemail/base64.hpp"
#include "securemail/clock.hpp"
#include "securemail/error.hpp"
#include "securemail/mail/attachment.hpp"

namespace securemail::mail {

inline constexpr std::string_view kNotificationSubject = "You have received a secure message";
inline constexpr std::string_view kNotificationFrom = "SecureMail <no-reply@securemail.local>";

struct NotificationEmail {
  std::string to;
  std::string subject;
  std::string body_text;
  HtmlAttachment attachment;
};

inline std::string rfc2822_date(std::int64_t epoch_ms) {
  std::time_t secs = static_cast<std::time_t>(epoch_ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%a, %d %b %Y %H:%M:%S +0000", &tm);
  return buf;
}

/// multipart/mixed message: a text/plain part with the reading link and the
/// HTML attachment as a base64 part.
inline std::string to_rfc822(const NotificationEmail& mail, std::int64_t date_ms = now_ms()) {
  const std::string boundary = "=_securemail_" + mail.attachment.message_id;
  std::string out;
  out += "From: " + std::string(kNotificationFrom) + "\r\n";
  out += "To: " + mail.to + "\r\n";
  out += "Subject: " + mail.subject + "\r\n";
  out += "Date: " + rfc2822_date(date_ms) + "\r\n";
  out += "MIME-Version: 1.0\r\n";
  out += "Content-Type: multipart/mixed; boundary=\"" + boundary + "\"\r\n";
  out += "\r\n";
  out += "--" + boundary + "\r\n";
  out += "Content-Type: text/plain; charset=utf-8\r\n";
  out += "Content-Transfer-Encoding: 8bit\r\n\r\n";
  out += mail.body_text;
  out += "\r\n--" + boundary + "\r\n";
  out += "Content-Type: text/html; charset=utf-8; name=\"" + std::string(kAttachmentFilename) +
         "\"\r\n";
  out += "Content-Disposition: attachment; filename=\"" + std::string(kAttachmentFilename) +
         "\"\r\n";
  out += "Content-Transfer-Encoding: base64\r\n\r\n";
  std::string b64 = base64::encode_std(as_bytes(mail.attachment.html));
  for (std::size_t i = 0; i < b64.size(); i += 76) out += b64.substr(i, 76) + "\r\n";
  out += "--" + boundary + "--\r\n";
  return out;
}

/// Pulls the HTML attachment back out of a file written by to_rfc822().
inline std::string extract_attachment_html(std::string_view rfc822) {
  static constexpr std::string_view kMarker = "Content-Transfer-Encoding: base64\r\n\r\n";
  auto start = rfc822.find(kMarker);
  if (start == std::string_view::npos) throw Error(ErrorCode::malformed_envelope, "no attachment");
  start += kMarker.size();
  auto end = rfc822.find("--", start);
  std::string b64;
  for (char c : rfc822.substr(start, end - start))
    if (c != '\r' && c != '\n') b64 += c;
  auto html = base64::decode_std(b64);
  if (!html) throw Error(ErrorCode::malformed_envelope, "attachment encoding");
  return as_string(*html);
}

class MailTransport {
 public:
  virtual ~MailTransport() = default;
  /// Throws TransportFailure if the message could not be handed over.
  virtual void deliver(const NotificationEmail& mail) = 0;
};

class OutboxTransport : public MailTransport {
 public:
  explicit OutboxTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  void deliver(const NotificationEmail& mail) override {
    std::string safe_to;
    for (char c : mail.to) safe_to += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    auto name = mail.attachment.message_id + "-" + safe_to + "-" + std::to_string(++counter_);
    auto tmp = dir_ / (name + ".tmp");
    auto final_path = dir_ / (name + ".eml");
    {
      std::ofstream out(tmp, std::ios::binary);
      out << to_rfc822(mail);
      if (!out) throw Error(ErrorCode::transport_failure, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) throw Error(ErrorCode::transport_failure, ec.message());
  }

  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::atomic<std::uint64_t> counter_{0};
};

}  // namespace securemail::mail
