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

#include <stdexcept>
#include <string>
#include <string_view>

namespace securemail {

enum class ErrorCode {
  entropy_unavailable,
  invalid_key,
  authentication_failed,
  malformed_envelope,
  unsupported_version,
  attachment_too_large,
  duplicate_message_id,
  empty_recipients,
  not_found,
  access_denied,
  transport_failure,
  out_of_bounds,
  impl_unavailable,
  incomplete_grid,
  io_failure,
  invalid_request,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::entropy_unavailable: return "EntropyUnavailable";
    case ErrorCode::invalid_key: return "InvalidKey";
    case ErrorCode::authentication_failed: return "AuthenticationFailed";
    case ErrorCode::malformed_envelope: return "MalformedEnvelope";
    case ErrorCode::unsupported_version: return "UnsupportedVersion";
    case ErrorCode::attachment_too_large: return "AttachmentTooLarge";
    case ErrorCode::duplicate_message_id: return "DuplicateMessageId";
    case ErrorCode::empty_recipients: return "EmptyRecipients";
    case ErrorCode::not_found: return "NotFound";
    case ErrorCode::access_denied: return "AccessDenied";
    case ErrorCode::transport_failure: return "TransportFailure";
    case ErrorCode::out_of_bounds: return "OutOfBounds";
    case ErrorCode::impl_unavailable: return "ImplUnavailable";
    case ErrorCode::incomplete_grid: return "IncompleteGrid";
    case ErrorCode::io_failure: return "IoFailure";
    case ErrorCode::invalid_request: return "InvalidRequest";
  }
  return "Unknown";
}

/// Every failure raised by the library. The message never contains secret
/// material or plaintext; callers may log it verbatim.
class Error : public std::runtime_error {
 public:
  explicit Error(ErrorCode code)
      : std::runtime_error(std::string(to_string(code))), code_(code) {}
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace securemail
