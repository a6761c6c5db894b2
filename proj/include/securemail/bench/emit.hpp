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

#ifndef SECUREMAIL_BENCH_EMIT_HPP_
#define SECUREMAIL_BENCH_EMIT_HPP_

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "securemail/bench/analysis.hpp"

namespace securemail::bench {

inline constexpr std::string_view kCsvHeader = "impl,op,size_bytes,mean_ms,speedup,normalized";

struct CsvRow {
  Impl impl = Impl::kernel_native;
  Op op = Op::encrypt;
  std::size_t size_bytes = 0;
  double mean_ms = 0;
  std::optional<double> speedup;
  double normalized = 0;

  friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

inline std::vector<CsvRow> csv_rows(const BenchReport& report) {
  std::vector<CsvRow> rows;
  for (const auto& c : report.cells)
    rows.push_back({c.impl, c.op, c.size_bytes, c.mean_ms, c.speedup, c.normalized});
  return rows;
}

// max_digits10 keeps every double exact through a text round trip.
inline std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << kCsvHeader << "\n";
  for (const auto& r : csv_rows(report)) {
    out << to_string(r.impl) << ',' << to_string(r.op) << ',' << r.size_bytes << ','
        << r.mean_ms << ',';
    if (r.speedup) out << *r.speedup;
    out << ',' << r.normalized << "\n";
  }
  return out.str();
}

inline std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw Error(ErrorCode::invalid_request, "csv header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string col; std::getline(ls, col, ',');) cols.push_back(col);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    if (cols.size() != 6) throw Error(ErrorCode::invalid_request, "csv row: " + line);
    auto impl = impl_from_string(cols[0]);
    auto op = op_from_string(cols[1]);
    if (!impl || !op) throw Error(ErrorCode::invalid_request, "csv row: " + line);
    CsvRow r;
    r.impl = *impl;
    r.op = *op;
    try {
      r.size_bytes = std::stoull(cols[2]);
      r.mean_ms = std::stod(cols[3]);
      if (!cols[4].empty()) r.speedup = std::stod(cols[4]);
      r.normalized = std::stod(cols[5]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_request, "csv row: " + line);
    }
    rows.push_back(r);
  }
  return rows;
}

/// Normalized time against normalized size for every series, plus the ideal
/// y = x reference line.
inline std::string to_svg(const BenchReport& report) {
  constexpr double kW = 640, kH = 480, kPad = 60;
  const double base = static_cast<double>(report.sizes.front());
  const double max_x = static_cast<double>(report.sizes.back()) / base;
  double max_y = max_x;
  for (const auto& c : report.cells) max_y = std::max(max_y, c.normalized);
  auto px = [&](double x) { return kPad + (x - 1) / std::max(max_x - 1, 1e-9) * (kW - 2 * kPad); };
  auto py = [&](double y) { return kH - kPad - (y - 1) / std::max(max_y - 1, 1e-9) * (kH - 2 * kPad); };

  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line class=\"axis\" x1=\"" << kPad << "\" y1=\"" << kH - kPad << "\" x2=\"" << kW - kPad
      << "\" y2=\"" << kH - kPad << "\" stroke=\"black\"/>\n";
  out << "<line class=\"axis\" x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad
      << "\" y2=\"" << kH - kPad << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 15
      << "\" text-anchor=\"middle\">payload size (normalized)</text>\n";
  out << "<text x=\"15\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 15 " << kH / 2
      << ")\" text-anchor=\"middle\">time (normalized)</text>\n";
  out << "<polyline id=\"ideal\" class=\"ideal\" fill=\"none\" stroke=\"gray\" "
         "stroke-dasharray=\"6 4\" points=\""
      << px(1) << ',' << py(1) << ' ' << px(max_x) << ',' << py(max_x) << "\"/>\n";

  std::size_t series = 0;
  for (const auto& [key, fit] : report.fits) {
    const char* color = kColors[series++ % std::size(kColors)];
    std::string name = std::string(to_string(key.first)) + "-" + std::string(to_string(key.second));
    out << "<polyline id=\"" << name << "\" class=\"measured\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& c : report.cells) {
      if (c.impl != key.first || c.op != key.second) continue;
      if (!first) out << ' ';
      first = false;
      out << px(static_cast<double>(c.size_bytes) / base) << ',' << py(c.normalized);
    }
    out << "\"/>\n";
    out << "<text x=\"" << kPad + 10 << "\" y=\"" << kPad + 18.0 * static_cast<double>(series)
        << "\" fill=\"" << color << "\">" << name << " (R2=" << std::setprecision(4)
        << fit.r_squared << std::setprecision(2) << ")</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
}

inline void emit_csv(const BenchReport& report, const std::filesystem::path& path) {
  write_file(path, to_csv(report));
}

inline void emit_svg(const BenchReport& report, const std::filesystem::path& path) {
  write_file(path, to_svg(report));
}

}  // namespace securemail::bench

#endif  // SECUREMAIL_BENCH_EMIT_HPP_
