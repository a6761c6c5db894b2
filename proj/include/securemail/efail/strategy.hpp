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

#ifndef SECUREMAIL_EFAIL_STRATEGY_HPP_
#define SECUREMAIL_EFAIL_STRATEGY_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string_view>
#include <vector>

#include "securemail/efail/mutation.hpp"

namespace securemail::efail {

using KindSet = std::set<MutationKind>;

inline KindSet all_attack_kinds() {
  KindSet s(std::begin(kAllKinds), std::end(kAllKinds));
  s.erase(MutationKind::identity);
  return s;
}

/// Parses "all" or a comma-separated list of kind names.
inline KindSet parse_kinds(std::string_view list) {
  if (list == "all") return all_attack_kinds();
  KindSet out;
  while (!list.empty()) {
    auto comma = list.find(',');
    auto name = list.substr(0, comma);
    auto kind = kind_from_string(name);
    if (!kind || *kind == MutationKind::identity)
      throw Error(ErrorCode::invalid_request, "unknown strategy: " + std::string(name));
    out.insert(*kind);
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
  }
  if (out.empty()) throw Error(ErrorCode::invalid_request, "no strategies selected");
  return out;
}

struct PlanOptions {
  KindSet kinds = all_attack_kinds();
  /// AD of another part of the same message; enables ad_swap.
  std::optional<Bytes> sibling_ad;
  Bytes inject_payload = to_bytes(kExfiltrationPrefix);
};

/// Every applicable mutation for each selected kind, preceded by the identity
/// control. Intended for small envelopes: bit flips alone are 8 per byte.
inline std::vector<Mutation> plan_exhaustive(ByteView encoded, const PlanOptions& opt) {
  const auto l = kernel::parse_layout(encoded);
  const std::size_t blocks = l.ciphertext_size / kBlockSize;
  std::vector<Mutation> plan{{MutationKind::identity}};
  for (MutationKind k : opt.kinds) {
    switch (k) {
      case MutationKind::bit_flip:
        for (std::size_t b = 0; b < encoded.size() * 8; ++b) plan.push_back({k, b});
        break;
      case MutationKind::block_splice:
        for (std::size_t i = 0; i < blocks; ++i)
          for (std::size_t j = i + 1; j < blocks; ++j) plan.push_back({k, i, j});
        break;
      case MutationKind::block_duplicate:
        for (std::size_t i = 0; i < blocks; ++i)
          for (std::size_t at = 0; at <= blocks; ++at) plan.push_back({k, i, at});
        break;
      case MutationKind::truncate:
        for (std::size_t n = 0; n < encoded.size(); ++n) plan.push_back({k, n});
        break;
      case MutationKind::html_prefix_inject:
        for (std::size_t off = 0; off <= l.ciphertext_size; ++off)
          plan.push_back({k, off, 0, opt.inject_payload});
        break;
      case MutationKind::ad_swap:
        if (opt.sibling_ad) plan.push_back({k, 0, 0, *opt.sibling_ad});
        break;
      case MutationKind::identity:
        break;
    }
  }
  return plan;
}

/// `count` mutations drawn uniformly over the selected kinds that apply to
/// this envelope, then uniformly over each kind's parameters. Deterministic
/// for a fixed seed. The identity control is prepended and not counted.
inline std::vector<Mutation> plan_sampled(ByteView encoded, const PlanOptions& opt,
                                          std::size_t count, std::uint64_t seed) {
  const auto l = kernel::parse_layout(encoded);
  const std::size_t blocks = l.ciphertext_size / kBlockSize;

  std::vector<MutationKind> usable;
  for (MutationKind k : opt.kinds) {
    if (k == MutationKind::identity) continue;
    if (k == MutationKind::block_splice && blocks < 2) continue;
    if (k == MutationKind::block_duplicate && blocks < 1) continue;
    if (k == MutationKind::ad_swap && !opt.sibling_ad) continue;
    usable.push_back(k);
  }
  if (usable.empty()) throw Error(ErrorCode::invalid_request, "no applicable strategies");

  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  std::vector<Mutation> plan{{MutationKind::identity}};
  plan.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i) {
    MutationKind k = usable[pick(usable.size())];
    switch (k) {
      case MutationKind::bit_flip:
        plan.push_back({k, pick(encoded.size() * 8)});
        break;
      case MutationKind::block_splice: {
        std::size_t a = pick(blocks);
        std::size_t b = pick(blocks - 1);
        if (b >= a) ++b;
        plan.push_back({k, a, b});
        break;
      }
      case MutationKind::block_duplicate:
        plan.push_back({k, pick(blocks), pick(blocks + 1)});
        break;
      case MutationKind::truncate:
        plan.push_back({k, pick(encoded.size())});
        break;
      case MutationKind::html_prefix_inject:
        plan.push_back({k, pick(l.ciphertext_size + 1), 0, opt.inject_payload});
        break;
      case MutationKind::ad_swap:
        plan.push_back({k, 0, 0, *opt.sibling_ad});
        break;
      case MutationKind::identity:
        break;
    }
  }
  return plan;
}

}  // namespace securemail::efail

#endif  // SECUREMAIL_EFAIL_STRATEGY_HPP_
