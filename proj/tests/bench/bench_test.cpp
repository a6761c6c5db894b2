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

#include <gtest/gtest.h>

#include <regex>

#include "securemail/bench/emit.hpp"
#include "support/local_server.hpp"

namespace securemail::bench {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_failure;
}

const std::vector<std::size_t> kGrid = {1, 2, 4, 8, 12, 16, 20};

// duration = factor * size (in MiB) for every repetition.
std::vector<BenchSample> synthetic(Impl impl, Op op, double factor, std::size_t reps = 10) {
  std::vector<BenchSample> out;
  for (std::size_t mib : kGrid)
    for (std::size_t r = 1; r <= reps; ++r)
      out.push_back({impl, op, mib * kMiB, factor * static_cast<double>(mib), r});
  return out;
}

TEST(PayloadTest, DeterministicAndSeedSensitive) {
  EXPECT_EQ(gen_payload(16, 1), gen_payload(16, 1));
  EXPECT_NE(gen_payload(kMiB, 1), gen_payload(kMiB, 2));
  EXPECT_EQ(gen_payload(13, 5).size(), 13u);
  EXPECT_EQ(code_of([] { gen_payload(0, 1); }), ErrorCode::invalid_request);
}

// 255 degrees of freedom: mean 255, sd about 22.6. 400 is over six sd out.
TEST(PayloadTest, ByteHistogramIsRoughlyUniform) {
  Bytes p = gen_payload(20 * kMiB, 1);
  std::array<std::size_t, 256> hist{};
  for (auto b : p) ++hist[b];
  const double expected = static_cast<double>(p.size()) / 256;
  double chi2 = 0;
  for (auto h : hist) {
    const double d = static_cast<double>(h) - expected;
    chi2 += d * d / expected;
  }
  EXPECT_LT(chi2, 400.0);
  EXPECT_GT(chi2, 150.0);
}

TEST(TimeOpTest, ProducesExactlyRepetitionSamples) {
  Bytes p = gen_payload(64 * 1024, 3);
  for (Op op : {Op::encrypt, Op::decrypt}) {
    auto s = time_op(Impl::kernel_native, op, p, 10);
    ASSERT_EQ(s.size(), 10u);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_GT(s[i].duration_ms, 0.0);
      EXPECT_EQ(s[i].repetition, i + 1);
      EXPECT_EQ(s[i].size_bytes, p.size());
      EXPECT_EQ(s[i].op, op);
    }
  }
}

TEST(TimeOpTest, GridCoversEveryCellWithExactRepetitions) {
  auto samples = run_grid(Impl::kernel_native, {4096, 8192, 16384}, 3, 1);
  ASSERT_EQ(samples.size(), 3u * 2u * 3u);
  auto report = analyze(samples, 3);
  EXPECT_EQ(report.cells.size(), 6u);
  EXPECT_EQ(report.sizes, (std::vector<std::size_t>{4096, 8192, 16384}));
}

TEST(TimeOpTest, BrowserImplementationsUnavailable) {
  Bytes p = gen_payload(16, 1);
  EXPECT_EQ(code_of([&] { time_op(Impl::kernel_portable, Op::encrypt, p); }),
            ErrorCode::impl_unavailable);
  EXPECT_EQ(code_of([&] { time_op(Impl::script_baseline, Op::decrypt, p); }),
            ErrorCode::impl_unavailable);
}

TEST(AnalyzeTest, SyntheticLinearInput) {
  auto report = analyze(synthetic(Impl::kernel_native, Op::encrypt, 3.0));
  auto fit = report.fits.at({Impl::kernel_native, Op::encrypt});
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(report.find(Impl::kernel_native, Op::encrypt, kMiB)->normalized, 1.0);
  EXPECT_NEAR(report.find(Impl::kernel_native, Op::encrypt, 20 * kMiB)->normalized, 20.0, 1e-12);
  EXPECT_NEAR(fit.slope_ms_per_byte * kMiB, 3.0, 1e-9);
  EXPECT_NEAR(fit.intercept_ms, 0.0, 1e-9);
  for (const auto& c : report.cells) {
    EXPECT_FALSE(c.speedup);
    EXPECT_FALSE(c.unstable);
  }
}

TEST(AnalyzeTest, SpeedupAgainstScriptBaseline) {
  auto samples = synthetic(Impl::kernel_portable, Op::encrypt, 2.0);
  auto script = synthetic(Impl::script_baseline, Op::encrypt, 27.8);
  samples.insert(samples.end(), script.begin(), script.end());
  auto report = analyze(samples);
  EXPECT_EQ(report.cells.size(), 14u);
  for (std::size_t mib : kGrid) {
    auto* c = report.find(Impl::kernel_portable, Op::encrypt, mib * kMiB);
    ASSERT_TRUE(c->speedup);
    EXPECT_NEAR(*c->speedup, 13.9, 1e-9);
    EXPECT_FALSE(report.find(Impl::script_baseline, Op::encrypt, mib * kMiB)->speedup);
  }
  EXPECT_EQ(ReferenceFigures::iphone_encrypt_speedup, 13.9);
}

TEST(AnalyzeTest, IncompleteGridRejected) {
  auto s = synthetic(Impl::kernel_native, Op::encrypt, 1.0);
  s.pop_back();
  EXPECT_EQ(code_of([&] { analyze(s); }), ErrorCode::incomplete_grid);

  auto missing_size = synthetic(Impl::kernel_native, Op::encrypt, 1.0);
  auto other = synthetic(Impl::kernel_native, Op::decrypt, 1.0);
  std::erase_if(other, [](const BenchSample& b) { return b.size_bytes == 4 * kMiB; });
  missing_size.insert(missing_size.end(), other.begin(), other.end());
  EXPECT_EQ(code_of([&] { analyze(missing_size); }), ErrorCode::incomplete_grid);
  EXPECT_EQ(code_of([] { analyze({}); }), ErrorCode::incomplete_grid);
}

TEST(AnalyzeTest, HighVariationCellIsFlagged) {
  auto s = synthetic(Impl::kernel_native, Op::encrypt, 1.0);
  for (auto& b : s)
    if (b.size_bytes == 2 * kMiB && b.repetition % 2 == 0) b.duration_ms *= 3;
  auto report = analyze(s);
  EXPECT_TRUE(report.find(Impl::kernel_native, Op::encrypt, 2 * kMiB)->unstable);
  EXPECT_FALSE(report.find(Impl::kernel_native, Op::encrypt, 4 * kMiB)->unstable);
}

TEST(EmitTest, CsvRoundTrip) {
  auto samples = synthetic(Impl::kernel_native, Op::encrypt, 1.7);
  auto more = synthetic(Impl::kernel_native, Op::decrypt, 2.3);
  auto script = synthetic(Impl::script_baseline, Op::encrypt, 9.1);
  samples.insert(samples.end(), more.begin(), more.end());
  samples.insert(samples.end(), script.begin(), script.end());
  auto report = analyze(samples);
  auto rows = parse_csv(to_csv(report));
  EXPECT_EQ(rows.size(), 3u * kGrid.size());
  EXPECT_EQ(rows, csv_rows(report));

  testing::TempDir dir;
  emit_csv(report, dir.path() / "r.csv");
  std::ifstream in(dir.path() / "r.csv");
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(parse_csv(text), rows);
  EXPECT_EQ(code_of([&] { emit_csv(report, dir.path() / "missing" / "r.csv"); }),
            ErrorCode::io_failure);
}

TEST(EmitTest, SvgHasMeasuredAndIdealLines) {
  auto s = synthetic(Impl::kernel_native, Op::encrypt, 1.0);
  auto d = synthetic(Impl::kernel_native, Op::decrypt, 1.1);
  s.insert(s.end(), d.begin(), d.end());
  std::string svg = to_svg(analyze(s));
  std::regex polyline(R"re(<polyline id="([^"]+)" class="(ideal|measured)"[^>]*points="([^"]+)")re");
  std::map<std::string, std::size_t> points;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), polyline);
       it != std::sregex_iterator(); ++it) {
    std::string pts = (*it)[3];
    points[(*it)[1]] = static_cast<std::size_t>(std::count(pts.begin(), pts.end(), ','));
  }
  EXPECT_EQ(points["ideal"], 2u);
  EXPECT_EQ(points["kernel_native-encrypt"], kGrid.size());
  EXPECT_EQ(points["kernel_native-decrypt"], kGrid.size());
  EXPECT_EQ(svg.rfind("</svg>"), svg.size() - 7);
}

}  // namespace
}  // namespace securemail::bench
