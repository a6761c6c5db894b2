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

// Seals the given file as a message body under a fresh key, attacks the
// envelope with the selected strategies and writes a JSON report. Exit status
// is 1 when any attack mutation was accepted, 2 on usage or I/O errors.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "securemail/efail/report.hpp"
#include "securemail/efail/strategy.hpp"

namespace {

using namespace securemail;

constexpr std::size_t kExhaustiveLimit = 64;

Bytes read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

kernel::AssociatedData ad_for(std::uint32_t index) {
  kernel::AssociatedData ad;
  ad.message_id = "efail-suite";
  ad.part_label = index == 0 ? kernel::PartLabel::body : kernel::PartLabel::attachment;
  ad.part_index = index;
  ad.sender_id = "harness";
  ad.content_type = std::string(index == 0 ? kernel::kBodyContentType
                                           : kernel::kAttachmentContentType);
  return ad;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EFail-style mutation suite"};
  std::string message, strategies = "all", out_path;
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool exhaustive = false;
  app.add_option("--message", message, "plaintext file to seal and attack")->required();
  app.add_option("--strategies", strategies, "all, or a comma-separated list of kinds");
  app.add_option("--out", out_path, "JSON report path")->required();
  app.add_option("--samples", samples, "mutations to sample for large envelopes");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
  app.add_flag("--exhaustive", exhaustive,
               "enumerate every mutation (default only for envelopes up to 64 bytes)");
  CLI11_PARSE(app, argc, argv);

  try {
    const Bytes plaintext = read_all(message);
    const auto key = kernel::generate_key();
    const Bytes encoded = kernel::encode_envelope(kernel::seal(plaintext, key, ad_for(0)));
    const Bytes sibling = kernel::encode_envelope(kernel::seal(Bytes{0}, key, ad_for(1)));

    efail::PlanOptions opt;
    opt.kinds = efail::parse_kinds(strategies);
    opt.sibling_ad = efail::associated_data_of(sibling);
    auto plan = exhaustive || encoded.size() <= kExhaustiveLimit
                    ? efail::plan_exhaustive(encoded, opt)
                    : efail::plan_sampled(encoded, opt, samples, seed);

    auto reports = efail::run_suite(encoded, efail::aead_opener(key), plan, threads);
    auto summary = efail::summarize(reports);
    std::ofstream out(out_path, std::ios::trunc);
    out << efail::to_json(summary, reports).dump(2) << "\n";
    if (!out) throw Error(ErrorCode::io_failure, "cannot write " + out_path);
    std::cout << "envelope bytes: " << encoded.size() << "\n" << efail::to_text(summary);
    return summary.exit_code();
  } catch (const Error& e) {
    std::cerr << "efail-suite: " << e.what() << "\n";
    return 2;
  }
}
