#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarsample/serialization.hpp"
#include "polarsample/synthetic.hpp"

namespace polarsample::cli {

enum ExitCode : int { kOk = 0, kPipelineFailure = 1, kConfigError = 2 };

/// Everything a run depends on. Serialized into manifest.json; `threads`
/// and `dry_run` are execution settings and stay out of it.
struct RunConfig {
  std::vector<std::string> inputs;
  std::string format = "jsonl";
  bool allow_self_retweets = false;

  std::string seeds_path;
  std::string keywords_path;
  std::string match_mode = "word";
  std::vector<std::string> anchor_ids;
  std::string anchor_path;

  std::string sweep_kind = "random";
  std::vector<double> fractions{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4,
                                0.5,  0.6,  0.7,  0.8, 0.9, 1.0};
  std::vector<double> alphas{0.01, 0.03, 0.05, 0.1, 0.2, 0.3, 0.4,
                             0.5,  0.6,  0.7,  0.8, 0.9, 1.0};
  std::size_t replicates = 10;

  std::uint64_t rng_seed = 42;
  std::size_t n_bootstrap = 10'000;
  std::string lwcc_mode = "sampled";
  std::size_t min_support = 10;
  std::size_t histogram_bins = 50;
  bool dump_matrix = false;

  std::string output_dir = "out";
  SyntheticConfig synthetic;

  std::size_t threads = 1;
  bool dry_run = false;
};

Json config_to_json(const RunConfig& config);
/// Accepts a bare config document or a manifest (uses its "config").
RunConfig config_from_json(const Json& document);

/// Runs one command line (without the program name). Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polarsample::cli
