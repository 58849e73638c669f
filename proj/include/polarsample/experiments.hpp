#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polarsample/core_types.hpp"
#include "polarsample/ingestion.hpp"
#include "polarsample/latent_ideology.hpp"
#include "polarsample/matrix_builder.hpp"
#include "polarsample/metrics.hpp"

namespace polarsample {

enum class LwccMode {
  /// Largest component over the nodes of the graph being evaluated.
  SampledGraph,
  /// Largest component over the node count of the unsampled graph.
  ReferenceGraph,
};

std::string_view to_string(LwccMode mode);
LwccMode lwcc_mode_from_string(std::string_view name);

inline constexpr std::size_t kDefaultMinSupport = 10;
/// A point is flagged as fragmented below both of these.
inline constexpr double kFragmentedLwcc = 0.5;
inline constexpr double kFragmentedRetweetShare = 0.3;

struct PipelineOptions {
  /// Influencers expected on the negative side after orientation.
  std::set<std::string> anchor;
  std::size_t n_bootstrap = kDefaultBootstrap;
  /// Every dip p-value in a run uses this stream, so equal (D, n) pairs
  /// always get equal p-values.
  RngStream bootstrap_rng{0, 0};
  LwccMode lwcc_mode = LwccMode::SampledGraph;
  std::size_t lwcc_reference_nodes = 0;
  CorrespondenceOptions correspondence;
};

struct PipelineOutput {
  InteractionMatrix matrix;
  /// Normalized and oriented.
  IdeologyScores scores;
  MetricsReport report;
};

/// build -> prune -> correspondence analysis -> normalize -> orient ->
/// metrics, on events already restricted to the sample under study.
/// An empty `reference` makes this run its own reference (distance 0).
PipelineOutput run_pipeline(const EventSet& events, const std::set<std::string>& influencers,
                            std::span<const double> reference, const PipelineOptions& options);

struct ExperimentOptions {
  std::set<std::string> anchor;
  std::size_t n_bootstrap = kDefaultBootstrap;
  std::size_t threads = 1;
  LwccMode lwcc_mode = LwccMode::SampledGraph;
  CorrespondenceOptions correspondence;
};

struct SweepPoint {
  double fraction = 1.0;
  std::size_t replicate = 0;
  std::size_t n_retweets = 0;
  std::optional<double> lwcc_relative;
  std::optional<MetricsReport> report;
  std::optional<ErrorCode> failure;
  /// Small, fragmented sample; a multimodal verdict here is not evidence.
  bool fragmented = false;

  bool failed() const { return failure.has_value(); }
  bool multimodal() const {
    return report && report->dip.verdict == Verdict::Multimodal;
  }

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepConfig {
  SampleSpec sample_template;
  std::vector<double> fractions;
  std::size_t replicates = 1;
  std::uint64_t rng_seed = 0;
  std::uint64_t rng_stream = 0;
  std::size_t n_bootstrap = kDefaultBootstrap;
  std::set<std::string> anchor;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct SweepResult {
  /// Sorted by fraction, then replicate.
  std::vector<SweepPoint> points;
  IdeologyScores reference_scores;
  MetricsReport reference_report;
  SweepConfig config;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Random subsamples of `events`, each restricted to `seeds` and scored.
/// The reference is the full data. Throws ReferenceFailed.
SweepResult run_random_sweep(const EventSet& events, const std::set<std::string>& seeds,
                             std::vector<double> fractions, std::size_t replicates,
                             const RngStream& rng, const ExperimentOptions& options);

/// Full data restricted to the top-alpha most retweeted seeds. The
/// reference is alpha = 1. Throws ReferenceFailed.
SweepResult run_seed_sweep(const EventSet& events, const std::set<std::string>& seeds,
                           std::vector<double> alphas, const RngStream& rng,
                           const ExperimentOptions& options);

struct BranchOutcome {
  std::optional<PipelineOutput> output;
  std::optional<ErrorCode> failure;
  std::string message;
  std::size_t n_events = 0;

  bool ok() const { return output.has_value(); }
};

struct KeywordExperimentResult {
  std::size_t n_filtered = 0;
  /// Influencers = seeds.
  BranchOutcome with_seeds;
  /// Influencers = every account retweeted in the filtered data.
  BranchOutcome all_influencers;
  /// Seed pipeline on the unfiltered data; distances are measured to it.
  IdeologyScores baseline;
};

KeywordExperimentResult run_keyword_experiment(const EventSet& events,
                                               const KeywordSet& keywords,
                                               const std::set<std::string>& seeds,
                                               const RngStream& rng,
                                               const ExperimentOptions& options);

struct KeywordStats {
  std::size_t n_tweets = 0;
  double mean_ideology = 0.0;
  std::vector<double> scores;
};

struct KeywordBiasResult {
  std::map<std::string, KeywordStats> per_keyword;
  /// Mean <= 0.
  std::vector<std::string> left_set;
  /// Mean > 0.
  std::vector<std::string> right_set;
  MatchMode match_mode = MatchMode::SubstringWordBoundary;
};

/// Mean retweeter score per keyword over tweets whose retweeter is scored.
/// Keywords with fewer than `min_support` such tweets are left out.
/// Throws NoScoredTweets when none qualifies.
KeywordBiasResult keyword_bias_split(const EventSet& events, const KeywordSet& keywords,
                                     const IdeologyScores& scores,
                                     std::size_t min_support = kDefaultMinSupport);

struct BiasedSample {
  std::vector<std::string> keywords;
  std::size_t n_events = 0;
  /// Baseline scores of the retweeters present in the filtered sample.
  std::vector<double> baseline_scores;
  /// The sample's own seed pipeline.
  BranchOutcome pipeline;
};

struct BiasedComparison {
  BiasedSample left;
  BiasedSample right;
  BiasedSample all;
};

/// Seed pipeline on the events matching the left keywords, the right
/// keywords and their union. Throws InvalidArgument when either side is
/// empty.
BiasedComparison run_biased_keyword_comparison(const EventSet& events,
                                               const KeywordBiasResult& bias,
                                               const std::set<std::string>& seeds,
                                               const IdeologyScores& baseline,
                                               const RngStream& rng,
                                               const ExperimentOptions& options);

/// Share of values with |x| <= half_width.
double central_mass(std::span<const double> values, double half_width = 0.5);

/// Stream labels used to derive per-purpose generators from a run seed.
namespace streams {
inline constexpr std::uint64_t kBootstrap = 0xB0075;
inline constexpr std::uint64_t kSampling = 0x5A3;
}  // namespace streams

}  // namespace polarsample
