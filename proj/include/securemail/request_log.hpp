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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>

#include "securemail/clock.hpp"
#include "securemail/error.hpp"

namespace securemail {

/// Access log shared by the HTTP front ends. Records request line and status
/// only; bodies and headers (which carry tokens and key material) are never
/// written.
class RequestLog {
 public:
  RequestLog() : out_(&std::clog) {}
  explicit RequestLog(const std::filesystem::path& path)
      : file_(path, std::ios::app), out_(&file_) {
    if (!file_) throw Error(ErrorCode::io_failure, "cannot open log " + path.string());
  }

  void record(std::string_view method, std::string_view path, int status) {
    std::lock_guard lock(mu_);
    *out_ << format_utc(now_ms()) << ' ' << method << ' ' << path << ' ' << status << '\n';
    out_->flush();
  }

 private:
  std::mutex mu_;
  std::ofstream file_;
  std::ostream* out_;
};

}  // namespace securemail
