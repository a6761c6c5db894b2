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

// The HTML attachment that carries a secure message inside an ordinary email,
// and the form-field encoding shared with the reading endpoint.
//
// Part i (0 = body, i >= 1 = attachment i-1) is represented by the hidden
// fields version_i, nonce_i, adata_i, mac_i and ciphertext_i. All byte values
// are unpadded base64url; `adata` is the canonical associated data and `mac`
// the AEAD tag. `message_id` and `parts` complete the form.

#include <charconv>
#include <map>
#include <string>
#include <string_view>

#include "securemail/base64.hpp"
#include "securemail/error.hpp"
#include "securemail/kernel/envelope.hpp"

namespace securemail::mail {

using FormFields = std::map<std::string, std::string>;

inline constexpr std::size_t kMaxParts = 1024;

/// Identifiers end up in file names, URLs and markup, so they are limited to
/// a conservative alphabet.
inline bool is_valid_message_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return id != "." && id != "..";
}

inline std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string html_unescape(std::string_view s) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (s[i] == '&') {
      for (auto [entity, ch] : kEntities)
        if (s.substr(i, entity.size()) == entity) {
          out += ch;
          i += entity.size();
          matched = true;
          break;
        }
    }
    if (!matched) out += s[i++];
  }
  return out;
}

inline FormFields fields_from_message(const kernel::EncryptedMessage& m) {
  FormFields f;
  f["message_id"] = m.message_id;
  f["parts"] = std::to_string(m.part_count());
  for (std::size_t i = 0; i < m.part_count(); ++i) {
    const auto& e = m.part(i);
    auto n = std::to_string(i);
    f["version_" + n] = std::to_string(e.version);
    f["nonce_" + n] = base64::encode_url(e.nonce);
    f["adata_" + n] = base64::encode_url(e.ad.serialize());
    f["mac_" + n] = base64::encode_url(e.tag);
    f["ciphertext_" + n] = base64::encode_url(e.ciphertext);
  }
  return f;
}

namespace detail {

inline const std::string& require(const FormFields& f, const std::string& name) {
  auto it = f.find(name);
  if (it == f.end()) throw Error(ErrorCode::malformed_envelope, "missing field " + name);
  return it->second;
}

inline Bytes require_b64(const FormFields& f, const std::string& name) {
  auto bytes = base64::decode_url(require(f, name));
  if (!bytes) throw Error(ErrorCode::malformed_envelope, "bad base64 in " + name);
  return std::move(*bytes);
}

inline std::size_t require_number(const FormFields& f, const std::string& name) {
  const auto& s = require(f, name);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::malformed_envelope, "bad number in " + name);
  return v;
}

}  // namespace detail

/// Rebuilds the envelope bundle from form fields. Throws MalformedEnvelope
/// (or UnsupportedVersion) on any structural problem.
inline kernel::EncryptedMessage message_from_fields(const FormFields& f) {
  using namespace detail;
  kernel::EncryptedMessage m;
  m.message_id = require(f, "message_id");
  if (!is_valid_message_id(m.message_id))
    throw Error(ErrorCode::malformed_envelope, "invalid message id");
  std::size_t parts = require_number(f, "parts");
  if (parts == 0 || parts > kMaxParts) throw Error(ErrorCode::malformed_envelope, "part count");
  for (std::size_t i = 0; i < parts; ++i) {
    auto n = std::to_string(i);
    kernel::Envelope e;
    std::size_t version = require_number(f, "version_" + n);
    if (version != kernel::kEnvelopeVersion) throw Error(ErrorCode::unsupported_version);
    e.version = static_cast<std::uint8_t>(version);
    Bytes nonce = require_b64(f, "nonce_" + n);
    Bytes tag = require_b64(f, "mac_" + n);
    if (nonce.size() != kernel::kNonceSize || tag.size() != kernel::kTagSize)
      throw Error(ErrorCode::malformed_envelope, "nonce or mac length");
    std::copy(nonce.begin(), nonce.end(), e.nonce.begin());
    std::copy(tag.begin(), tag.end(), e.tag.begin());
    e.ad = kernel::AssociatedData::parse(require_b64(f, "adata_" + n));
    e.ciphertext = require_b64(f, "ciphertext_" + n);
    if (i == 0)
      m.body_envelope = std::move(e);
    else
      m.attachment_envelopes.push_back(std::move(e));
  }
  if (!kernel::parts_consistent(m))
    throw Error(ErrorCode::malformed_envelope, "parts disagree with associated data");
  return m;
}

struct HtmlAttachment {
  std::string message_id;
  std::string html;
};

inline constexpr std::string_view kAttachmentFilename = "secure-message.html";

/// Standalone HTML document whose form posts the bundle to `action_url`.
/// The attachment document for an arbitrary field set. Fields are emitted in
/// map order, so rendering is deterministic.
inline std::string render_form_html(const FormFields& fields, std::string_view action_url) {
  std::string html;
  html +=
      "<!DOCTYPE html>\n"
      "<html lang=\"en\">\n"
      "<head>\n"
      "<meta charset=\"utf-8\">\n"
      "<title>Secure message</title>\n"
      "</head>\n"
      "<body>\n"
      "<h1>Secure message</h1>\n"
      "<p>This file contains an encrypted message. Press the button to open it "
      "in your browser.</p>\n"
      "<form method=\"post\" action=\"";
  html += html_escape(action_url);
  html += "\" enctype=\"application/x-www-form-urlencoded\">\n";
  for (const auto& [name, value] : fields) {
    html += "<input type=\"hidden\" name=\"";
    html += html_escape(name);
    html += "\" value=\"";
    html += html_escape(value);
    html += "\">\n";
  }
  html +=
      "<button type=\"submit\">Read secure message</button>\n"
      "</form>\n"
      "</body>\n"
      "</html>\n";
  return html;
}

inline HtmlAttachment render_attachment_html(const kernel::EncryptedMessage& m,
                                             std::string_view action_url) {
  return {m.message_id, render_form_html(fields_from_message(m), action_url)};
}

/// Extracts the hidden inputs of a document produced by render_attachment_html.
inline FormFields parse_attachment_fields(std::string_view html) {
  static constexpr std::string_view kOpen = "<input type=\"hidden\" name=\"";
  static constexpr std::string_view kMid = "\" value=\"";
  FormFields fields;
  std::size_t pos = 0;
  while ((pos = html.find(kOpen, pos)) != std::string_view::npos) {
    pos += kOpen.size();
    auto name_end = html.find('"', pos);
    if (name_end == std::string_view::npos || html.substr(name_end, kMid.size()) != kMid)
      throw Error(ErrorCode::malformed_envelope, "unterminated hidden field");
    auto value_start = name_end + kMid.size();
    auto value_end = html.find('"', value_start);
    if (value_end == std::string_view::npos)
      throw Error(ErrorCode::malformed_envelope, "unterminated hidden field");
    fields[html_unescape(html.substr(pos, name_end - pos))] =
        html_unescape(html.substr(value_start, value_end - value_start));
    pos = value_end;
  }
  return fields;
}

inline std::string parse_form_action(std::string_view html) {
  static constexpr std::string_view kAction = "action=\"";
  auto pos = html.find(kAction);
  if (pos == std::string_view::npos) return {};
  pos += kAction.size();
  auto end = html.find('"', pos);
  return html_unescape(html.substr(pos, end - pos));
}

inline kernel::EncryptedMessage parse_attachment(std::string_view html) {
  return message_from_fields(parse_attachment_fields(html));
}

}  // namespace securemail::mail
