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

#ifndef SECUREMAIL_BENCH_TIMING_HPP_
#define SECUREMAIL_BENCH_TIMING_HPP_

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "securemail/bytes.hpp"
#include "securemail/error.hpp"
#include "securemail/kernel/gcm.hpp"
#include "securemail/random.hpp"

namespace securemail::bench {

inline constexpr std::size_t kMiB = 1024 * 1024;
inline constexpr std::size_t kDefaultRepetitions = 10;

enum class Impl { kernel_native, kernel_portable, script_baseline };
enum class Op { encrypt, decrypt };

constexpr std::string_view to_string(Impl impl) {
  switch (impl) {
    case Impl::kernel_native: return "kernel_native";
    case Impl::kernel_portable: return "kernel_portable";
    case Impl::script_baseline: return "script_baseline";
  }
  return "unknown";
}

constexpr std::string_view to_string(Op op) {
  return op == Op::encrypt ? "encrypt" : "decrypt";
}

inline std::optional<Impl> impl_from_string(std::string_view s) {
  for (Impl i : {Impl::kernel_native, Impl::kernel_portable, Impl::script_baseline})
    if (to_string(i) == s) return i;
  return std::nullopt;
}

inline std::optional<Op> op_from_string(std::string_view s) {
  if (s == "encrypt") return Op::encrypt;
  if (s == "decrypt") return Op::decrypt;
  return std::nullopt;
}

struct BenchSample {
  Impl impl = Impl::kernel_native;
  Op op = Op::encrypt;
  std::size_t size_bytes = 0;
  double duration_ms = 0;
  std::size_t repetition = 0;
};

/// Deterministic pseudorandom payload.
inline Bytes gen_payload(std::size_t size_bytes, std::uint64_t seed) {
  if (size_bytes == 0) throw Error(ErrorCode::invalid_request, "payload size must be >= 1");
  Bytes out(size_bytes);
  std::mt19937_64 rng(seed);
  std::size_t i = 0;
  for (; i + 8 <= size_bytes; i += 8) {
    std::uint64_t v = rng();
    std::memcpy(out.data() + i, &v, 8);
  }
  if (i < size_bytes) {
    std::uint64_t v = rng();
    std::memcpy(out.data() + i, &v, size_bytes - i);
  }
  return out;
}

/// One benchmark cell: an AEAD operation over a fixed payload. Key schedule,
/// buffer allocation and nonce generation happen outside the timed region.
/// Decrypt output is compared with the payload after every run so the work
/// cannot be elided.
///
/// Only the native kernel runs here; the portable and script builds exist in
/// the browser and throw ImplUnavailable.
class CellTimer {
 public:
  CellTimer(Impl impl, Op op, ByteView payload) : impl_(impl), op_(op), payload_(payload) {
    if (impl != Impl::kernel_native)
      throw Error(ErrorCode::impl_unavailable, std::string(to_string(impl)));
    if (payload.empty()) throw Error(ErrorCode::invalid_request, "empty payload");
    std::array<std::uint8_t, 16> key_bytes{};
    fill_random(key_bytes);
    gcm_.emplace(key_bytes);
    secure_wipe(key_bytes.data(), key_bytes.size());
    out_.resize(payload.size());
    if (op == Op::decrypt) {
      ciphertext_.resize(payload.size());
      fill_random(nonce_);
      tag_ = gcm_->encrypt(nonce_, aad_, payload_, ciphertext_);
    }
  }

  /// Runs the operation once and returns its duration in milliseconds.
  double run_once() {
    using Clock = std::chrono::steady_clock;
    Clock::time_point start, stop;
    if (op_ == Op::encrypt) {
      fill_random(nonce_);
      start = Clock::now();
      tag_ = gcm_->encrypt(nonce_, aad_, payload_, out_);
      stop = Clock::now();
    } else {
      std::fill(out_.begin(), out_.end(), 0);
      start = Clock::now();
      bool ok = gcm_->decrypt(nonce_, aad_, ciphertext_, tag_, out_);
      stop = Clock::now();
      if (!ok || !std::equal(out_.begin(), out_.end(), payload_.begin()))
        throw Error(ErrorCode::authentication_failed, "benchmark decrypt mismatch");
    }
    return std::chrono::duration<double, std::milli>(stop - start).count();
  }

  BenchSample sample(std::size_t repetition) {
    return {impl_, op_, payload_.size(), run_once(), repetition};
  }

 private:
  Impl impl_;
  Op op_;
  ByteView payload_;
  std::optional<kernel::Aes128Gcm> gcm_;
  kernel::Aes128Gcm::Nonce nonce_{};
  kernel::Aes128Gcm::Tag tag_{};
  Bytes aad_ = to_bytes("benchmark");
  Bytes ciphertext_;
  Bytes out_;
};

/// One untimed warm-up run followed by `repetitions` timed runs.
inline std::vector<BenchSample> time_op(Impl impl, Op op, ByteView payload,
                                        std::size_t repetitions = kDefaultRepetitions) {
  CellTimer cell(impl, op, payload);
  cell.run_once();
  std::vector<BenchSample> samples;
  samples.reserve(repetitions);
  for (std::size_t rep = 1; rep <= repetitions; ++rep) samples.push_back(cell.sample(rep));
  return samples;
}

/// Times encrypt and decrypt at every size, one generated payload per size.
/// Every cell is set up and warmed first; the timed repetitions then proceed
/// in rounds over all cells, so slow drift in machine speed is spread across
/// sizes instead of lining up with them. Strictly sequential.
inline std::vector<BenchSample> run_grid(Impl impl, const std::vector<std::size_t>& sizes_bytes,
                                         std::size_t repetitions, std::uint64_t seed) {
  std::vector<Bytes> payloads;
  payloads.reserve(sizes_bytes.size());
  for (std::size_t size : sizes_bytes) payloads.push_back(gen_payload(size, seed + size));
  std::vector<CellTimer> cells;
  for (const auto& p : payloads)
    for (Op op : {Op::encrypt, Op::decrypt}) cells.emplace_back(impl, op, p);
  for (auto& c : cells) c.run_once();

  std::vector<BenchSample> all;
  all.reserve(cells.size() * repetitions);
  for (std::size_t rep = 1; rep <= repetitions; ++rep)
    for (auto& c : cells) all.push_back(c.sample(rep));
  return all;
}

}  // namespace securemail::bench

#endif  // SECUREMAIL_BENCH_TIMING_HPP_
