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

#ifndef SECUREMAIL_EFAIL_REPORT_HPP_
#define SECUREMAIL_EFAIL_REPORT_HPP_

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "securemail/base64.hpp"
#include "securemail/efail/suite.hpp"

namespace securemail::efail {

struct KindTotals {
  std::size_t total = 0;
  std::size_t rejected = 0;
  std::size_t accepted = 0;
};

struct SuiteSummary {
  std::map<MutationKind, KindTotals> per_kind;
  std::size_t total = 0;
  std::size_t leaked_bytes = 0;  // summed over non-control mutations
  std::vector<MutationReport> accepted_attacks;

  /// 0 when every non-control mutation was rejected, 1 otherwise.
  int exit_code() const { return accepted_attacks.empty() ? 0 : 1; }
};

inline SuiteSummary summarize(const std::vector<MutationReport>& reports) {
  if (reports.empty()) throw Error(ErrorCode::invalid_request, "no reports");
  SuiteSummary s;
  for (const auto& r : reports) {
    KindTotals& t = s.per_kind[r.mutation.kind];
    ++t.total;
    ++s.total;
    if (r.rejected) {
      ++t.rejected;
    } else {
      ++t.accepted;
    }
    if (r.mutation.kind == MutationKind::identity) continue;
    s.leaked_bytes += r.leaked_bytes;
    if (!r.rejected) s.accepted_attacks.push_back(r);
  }
  return s;
}

inline nlohmann::json to_json(const Mutation& m) {
  nlohmann::json j{{"kind", to_string(m.kind)}, {"position", m.position}, {"second", m.second}};
  if (!m.payload.empty()) j["payload"] = base64::encode_url(m.payload);
  return j;
}

inline nlohmann::json to_json(const MutationReport& r) {
  return {{"mutation", to_json(r.mutation)},
          {"rejected", r.rejected},
          {"error_kind", r.error_kind},
          {"leaked_bytes", r.leaked_bytes}};
}

inline nlohmann::json to_json(const SuiteSummary& s, const std::vector<MutationReport>& reports) {
  nlohmann::json totals = nlohmann::json::object();
  for (const auto& [kind, t] : s.per_kind)
    totals[std::string(to_string(kind))] = {
        {"total", t.total}, {"rejected", t.rejected}, {"accepted", t.accepted}};
  nlohmann::json accepted = nlohmann::json::array();
  for (const auto& r : s.accepted_attacks) accepted.push_back(to_json(r.mutation));
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : reports) all.push_back(to_json(r));
  return {{"total", s.total},
          {"leaked_bytes", s.leaked_bytes},
          {"exit_code", s.exit_code()},
          {"totals", totals},
          {"accepted_attacks", accepted},
          {"reports", all}};
}

inline std::string to_text(const SuiteSummary& s) {
  std::ostringstream out;
  out << "mutations: " << s.total << "\n";
  for (const auto& [kind, t] : s.per_kind)
    out << "  " << to_string(kind) << ": " << t.rejected << "/" << t.total << " rejected\n";
  out << "leaked bytes: " << s.leaked_bytes << "\n";
  if (s.accepted_attacks.empty()) {
    out << "result: all attack mutations rejected\n";
  } else {
    out << "result: " << s.accepted_attacks.size() << " attack mutation(s) ACCEPTED\n";
    for (const auto& r : s.accepted_attacks) out << "  " << describe(r.mutation) << "\n";
  }
  return out.str();
}

}  // namespace securemail::efail

#endif  // SECUREMAIL_EFAIL_REPORT_HPP_
