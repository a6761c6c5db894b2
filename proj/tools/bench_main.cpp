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

#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "securemail/bench/emit.hpp"

int main(int argc, char** argv) {
  using namespace securemail;
  using namespace securemail::bench;

  CLI::App app{"AEAD throughput benchmark"};
  std::vector<std::size_t> sizes_mib = {1, 2, 4, 8, 12, 16, 20};
  std::size_t reps = kDefaultRepetitions;
  std::string impl_name = "kernel_native", out_path = "results.csv", svg_path;
  std::uint64_t seed = 1;
  app.add_option("--sizes", sizes_mib, "payload sizes in MiB")->delimiter(',');
  app.add_option("--reps", reps, "timed repetitions per cell");
  app.add_option("--impl", impl_name, "implementation")
      ->check(CLI::IsMember({"kernel_native", "kernel_portable", "script_baseline"}));
  app.add_option("--out", out_path, "CSV output path");
  app.add_option("--svg", svg_path, "optional SVG scalability chart");
  app.add_option("--seed", seed, "payload PRNG seed");
  CLI11_PARSE(app, argc, argv);

  try {
    if (reps == 0 || sizes_mib.empty()) throw Error(ErrorCode::invalid_request, "empty grid");
    std::vector<std::size_t> sizes;
    for (auto m : sizes_mib) sizes.push_back(m * kMiB);
    auto samples = run_grid(*impl_from_string(impl_name), sizes, reps, seed);
    auto report = analyze(samples, reps);
    emit_csv(report, out_path);
    if (!svg_path.empty()) emit_svg(report, svg_path);

    std::cout << std::fixed << std::setprecision(3);
    for (const auto& c : report.cells)
      std::cout << to_string(c.op) << " " << std::setw(3) << c.size_bytes / kMiB << " MiB  "
                << std::setw(10) << c.mean_ms << " ms  normalized " << c.normalized
                << (c.unstable ? "  [cv > 25%]" : "") << "\n";
    for (const auto& [key, fit] : report.fits)
      std::cout << to_string(key.second) << " R^2 = " << std::setprecision(5) << fit.r_squared
                << "\n";
    std::cout << std::setprecision(1) << "reference (mobile browsers): 20 MiB encrypt "
              << ReferenceFigures::iphone_wasm_20mib_ms << " / "
              << ReferenceFigures::pixel_wasm_20mib_ms << " ms\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return e.code() == ErrorCode::impl_unavailable ? 3 : 1;
  }
}
