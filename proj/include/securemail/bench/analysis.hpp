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

#ifndef SECUREMAIL_BENCH_ANALYSIS_HPP_
#define SECUREMAIL_BENCH_ANALYSIS_HPP_

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "securemail/bench/timing.hpp"

namespace securemail::bench {

inline constexpr double kCvFlagThreshold = 0.25;

// Published mobile-device measurements, kept for annotating reports. They are
// never used as pass/fail thresholds.
struct ReferenceFigures {
  static constexpr double iphone_encrypt_speedup = 13.9;
  static constexpr double pixel_encrypt_speedup = 6.9;
  static constexpr double decrypt_speedup = 5.1;
  static constexpr double iphone_wasm_20mib_ms = 307.2;
  static constexpr double pixel_wasm_20mib_ms = 786.9;
  static constexpr double iphone_js_20mib_ms = 4305.6;
  static constexpr double pixel_js_20mib_ms = 5700.4;
  static constexpr double device_ratio_wasm = 2.6;
  static constexpr double device_ratio_js = 1.3;
};

struct Cell {
  Impl impl = Impl::kernel_native;
  Op op = Op::encrypt;
  std::size_t size_bytes = 0;
  double mean_ms = 0;
  double cv = 0;
  bool unstable = false;
  std::optional<double> speedup;  // script mean / kernel mean, kernel rows only
  double normalized = 0;          // mean / mean at the smallest size
};

struct LinearFit {
  double slope_ms_per_byte = 0;
  double intercept_ms = 0;
  double r_squared = 0;
};

struct BenchReport {
  std::vector<std::size_t> sizes;
  std::size_t repetitions = 0;
  std::vector<Cell> cells;  // ordered by impl, op, size
  std::map<std::pair<Impl, Op>, LinearFit> fits;

  const Cell* find(Impl impl, Op op, std::size_t size) const {
    for (const auto& c : cells)
      if (c.impl == impl && c.op == op && c.size_bytes == size) return &c;
    return nullptr;
  }
};

/// Ordinary least squares of y on x.
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope_ms_per_byte = sxx > 0 ? sxy / sxx : 0;
  f.intercept_ms = my - f.slope_ms_per_byte * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.intercept_ms + f.slope_ms_per_byte * x[i]);
    ss_res += r * r;
  }
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

/// Aggregates samples into per-cell means. Every (impl, op) present must have
/// exactly `repetitions` samples at every size seen in the input; otherwise
/// IncompleteGrid is thrown.
inline BenchReport analyze(const std::vector<BenchSample>& samples,
                           std::size_t repetitions = kDefaultRepetitions) {
  if (samples.empty()) throw Error(ErrorCode::incomplete_grid, "no samples");
  std::set<std::size_t> sizes;
  std::set<std::pair<Impl, Op>> series;
  std::map<std::tuple<Impl, Op, std::size_t>, std::vector<double>> groups;
  for (const auto& s : samples) {
    sizes.insert(s.size_bytes);
    series.insert({s.impl, s.op});
    groups[{s.impl, s.op, s.size_bytes}].push_back(s.duration_ms);
  }

  BenchReport report;
  report.sizes.assign(sizes.begin(), sizes.end());
  report.repetitions = repetitions;
  for (const auto& [impl, op] : series) {
    for (std::size_t size : sizes) {
      auto it = groups.find({impl, op, size});
      std::size_t have = it == groups.end() ? 0 : it->second.size();
      if (have != repetitions)
        throw Error(ErrorCode::incomplete_grid,
                    std::string(to_string(impl)) + "/" + std::string(to_string(op)) + " at " +
                        std::to_string(size) + " bytes has " + std::to_string(have) +
                        " samples");
      const auto& v = it->second;
      double mean = 0;
      for (double d : v) mean += d;
      mean /= static_cast<double>(v.size());
      double var = 0;
      for (double d : v) var += (d - mean) * (d - mean);
      double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0;
      Cell c;
      c.impl = impl;
      c.op = op;
      c.size_bytes = size;
      c.mean_ms = mean;
      c.cv = mean > 0 ? sd / mean : 0;
      c.unstable = c.cv > kCvFlagThreshold;
      report.cells.push_back(c);
    }
  }

  const std::size_t base = report.sizes.front();
  for (auto& c : report.cells) {
    c.normalized = c.mean_ms / report.find(c.impl, c.op, base)->mean_ms;
    if (c.impl == Impl::script_baseline) continue;
    if (const Cell* script = report.find(Impl::script_baseline, c.op, c.size_bytes))
      c.speedup = script->mean_ms / c.mean_ms;
  }

  for (const auto& key : series) {
    std::vector<double> x, y;
    for (const auto& c : report.cells) {
      if (std::pair{c.impl, c.op} != key) continue;
      x.push_back(static_cast<double>(c.size_bytes));
      y.push_back(c.mean_ms);
    }
    report.fits[key] = fit_line(x, y);
  }
  return report;
}

}  // namespace securemail::bench

#endif  // SECUREMAIL_BENCH_ANALYSIS_HPP_
