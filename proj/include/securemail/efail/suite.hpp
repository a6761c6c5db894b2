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

#ifndef SECUREMAIL_EFAIL_SUITE_HPP_
#define SECUREMAIL_EFAIL_SUITE_HPP_

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "securemail/efail/mutation.hpp"
#include "securemail/kernel/kernel.hpp"

namespace securemail::efail {

/// What a decryption pipeline did with one (possibly mutated) envelope.
struct OpenOutcome {
  bool accepted = false;
  std::string error_kind;
  std::size_t plaintext_size = 0;
};

/// Attempts to decode and open an encoded envelope. Must be callable from
/// several threads at once.
using Opener = std::function<OpenOutcome(ByteView encoded)>;

struct MutationReport {
  Mutation mutation;
  bool rejected = false;
  std::string error_kind;
  std::size_t leaked_bytes = 0;
};

/// The production pipeline: strict decode followed by AES-128-GCM open.
inline Opener aead_opener(const kernel::MessageKey& key) {
  auto gcm = std::make_shared<const kernel::Aes128Gcm>(key.material());
  return [gcm](ByteView encoded) {
    OpenOutcome o;
    try {
      Bytes pt = kernel::detail::open_with(*gcm, kernel::decode_envelope(encoded));
      o.accepted = true;
      o.plaintext_size = pt.size();
      secure_wipe(pt.data(), pt.size());
    } catch (const Error& e) {
      o.error_kind = std::string(to_string(e.code()));
    }
    return o;
  };
}

/// Runs every mutation in `plan` through `open` on `threads` workers and
/// returns the reports sorted by mutation. The unmutated envelope must open;
/// otherwise the suite would measure nothing and InvalidRequest is thrown.
inline std::vector<MutationReport> run_suite(ByteView encoded, const Opener& open,
                                             const std::vector<Mutation>& plan,
                                             unsigned threads = 0) {
  if (!open(encoded).accepted)
    throw Error(ErrorCode::invalid_request, "control envelope does not open");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(plan.size(), 1)));

  std::vector<MutationReport> reports(plan.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < plan.size();) {
        OpenOutcome o = open(mutate(encoded, plan[i]));
        MutationReport& r = reports[i];
        r.mutation = plan[i];
        r.rejected = !o.accepted;
        r.error_kind = std::move(o.error_kind);
        r.leaked_bytes = o.accepted ? o.plaintext_size : 0;
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = plan.size();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::sort(reports.begin(), reports.end(),
            [](const MutationReport& a, const MutationReport& b) { return a.mutation < b.mutation; });
  return reports;
}

}  // namespace securemail::efail

#endif  // SECUREMAIL_EFAIL_SUITE_HPP_
