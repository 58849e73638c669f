#include "polarsample/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace polarsample {
namespace {

/// Runs task(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots so scheduling cannot affect them.
template <typename Task>
void parallel_for(std::size_t n, std::size_t threads, Task task) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

PipelineOptions pipeline_options(const ExperimentOptions& options, const RngStream& rng,
                                 std::size_t reference_nodes) {
  PipelineOptions p;
  p.anchor = options.anchor;
  p.n_bootstrap = options.n_bootstrap;
  p.bootstrap_rng = rng.derive(streams::kBootstrap);
  p.lwcc_mode = options.lwcc_mode;
  p.lwcc_reference_nodes = reference_nodes;
  p.correspondence = options.correspondence;
  return p;
}

double lwcc_for(const EventSet& events, const PipelineOptions& options) {
  if (options.lwcc_mode == LwccMode::ReferenceGraph && options.lwcc_reference_nodes > 0) {
    return lwcc_relative_to(events, options.lwcc_reference_nodes);
  }
  return lwcc_relative_size(events);
}

EventSet restrict_to(const EventSet& events, const std::set<std::string>& influencers,
                     SampleSpec step) {
  std::vector<RetweetEvent> kept;
  for (const auto& e : events.events()) {
    if (influencers.contains(e.influencer_id)) kept.push_back(e);
  }
  return events.derived(std::move(kept), std::move(step));
}

SweepPoint evaluate_point(const EventSet& sample, const std::set<std::string>& influencers,
                          std::span<const double> reference, std::size_t reference_retweets,
                          const PipelineOptions& options) {
  SweepPoint point;
  point.n_retweets = sample.size();
  if (!sample.empty()) point.lwcc_relative = lwcc_for(sample, options);
  try {
    point.report = run_pipeline(sample, influencers, reference, options).report;
  } catch (const Error& e) {
    point.failure = e.code();
  }
  point.fragmented = point.lwcc_relative.value_or(0.0) < kFragmentedLwcc &&
                     static_cast<double>(point.n_retweets) <
                         kFragmentedRetweetShare * static_cast<double>(reference_retweets);
  return point;
}

struct Reference {
  PipelineOutput output;
  std::vector<double> user_scores;
};

Reference reference_run(const EventSet& events, const std::set<std::string>& influencers,
                        const PipelineOptions& options) {
  try {
    Reference ref{run_pipeline(events, influencers, {}, options), {}};
    ref.user_scores = user_score_values(ref.output.scores);
    return ref;
  } catch (const Error& e) {
    throw Error(ErrorCode::ReferenceFailed, e.what());
  }
}

void check_fractions(std::vector<double>& fractions) {
  if (fractions.empty()) throw Error(ErrorCode::InvalidArgument, "no fractions given");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "fractions must lie in (0, 1]");
    }
  }
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
}

BranchOutcome run_branch(const EventSet& events, const std::set<std::string>& influencers,
                         std::span<const double> reference, const PipelineOptions& options) {
  BranchOutcome outcome;
  outcome.n_events = events.size();
  try {
    if (influencers.empty()) throw Error(ErrorCode::EmptyMatrix, "no influencers");
    outcome.output = run_pipeline(events, influencers, reference, options);
  } catch (const Error& e) {
    outcome.failure = e.code();
    outcome.message = e.what();
  }
  return outcome;
}

}  // namespace

std::string_view to_string(LwccMode mode) {
  return mode == LwccMode::ReferenceGraph ? "reference" : "sampled";
}

LwccMode lwcc_mode_from_string(std::string_view name) {
  if (name == "sampled") return LwccMode::SampledGraph;
  if (name == "reference") return LwccMode::ReferenceGraph;
  throw Error(ErrorCode::InvalidArgument, "unknown lwcc mode '" + std::string(name) + "'");
}

PipelineOutput run_pipeline(const EventSet& events, const std::set<std::string>& influencers,
                            std::span<const double> reference, const PipelineOptions& options) {
  if (events.empty()) throw Error(ErrorCode::EmptyMatrix, "no events");
  InteractionMatrix pruned = prune_single_influencer_users(build_matrix(events, influencers));
  IdeologyScores scores = normalize_scores(correspondence_analysis(pruned, options.correspondence));
  scores = sign_convention(scores, options.anchor);

  const std::vector<double> users = user_score_values(scores);
  MetricsReport report;
  report.dip = dip_test(users, options.n_bootstrap, options.bootstrap_rng);
  report.wasserstein_to_reference = reference.empty() ? 0.0 : wasserstein_1d(users, reference);
  report.lwcc_relative = lwcc_for(events, options);
  report.n_retweets = events.size();
  report.n_users = pruned.rows();
  report.n_influencers = pruned.cols();
  return {std::move(pruned), std::move(scores), report};
}

SweepResult run_random_sweep(const EventSet& events, const std::set<std::string>& seeds,
                             std::vector<double> fractions, std::size_t replicates,
                             const RngStream& rng, const ExperimentOptions& options) {
  check_fractions(fractions);
  if (replicates == 0) throw Error(ErrorCode::InvalidArgument, "replicates must be positive");
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed set");

  const std::size_t full_nodes = weak_components(events).nodes;
  PipelineOptions popts = pipeline_options(options, rng, full_nodes);
  const EventSet full = filter_by_seeds(events, seeds);
  const Reference ref = reference_run(full, seeds, popts);

  SweepResult result;
  result.reference_scores = ref.output.scores;
  result.reference_report = ref.output.report;
  result.config.sample_template.kind = SampleKind::Random;
  result.config.sample_template.seed_ids = seeds;
  result.config.sample_template.rng_seed = rng.seed();
  result.config.sample_template.rng_stream = rng.stream_id();
  result.config.fractions = fractions;
  result.config.replicates = replicates;
  result.config.rng_seed = rng.seed();
  result.config.rng_stream = rng.stream_id();
  result.config.n_bootstrap = options.n_bootstrap;
  result.config.anchor = options.anchor;

  const RngStream sampling = rng.derive(streams::kSampling);
  result.points.resize(fractions.size() * replicates);
  parallel_for(result.points.size(), options.threads, [&](std::size_t task) {
    const double fraction = fractions[task / replicates];
    const std::size_t replicate = task % replicates;
    // Keyed by the fraction's value so adding grid points leaves others intact.
    const RngStream draw =
        sampling.derive(std::bit_cast<std::uint64_t>(fraction)).derive(replicate);
    const EventSet sample = filter_by_seeds(random_sample(events, fraction, draw), seeds);
    SweepPoint point =
        evaluate_point(sample, seeds, ref.user_scores, ref.output.report.n_retweets, popts);
    point.fraction = fraction;
    point.replicate = replicate;
    result.points[task] = std::move(point);
  });
  return result;
}

SweepResult run_seed_sweep(const EventSet& events, const std::set<std::string>& seeds,
                           std::vector<double> alphas, const RngStream& rng,
                           const ExperimentOptions& options) {
  check_fractions(alphas);
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed set");

  const std::size_t full_nodes = weak_components(filter_by_seeds(events, seeds)).nodes;
  PipelineOptions popts = pipeline_options(options, rng, full_nodes);

  auto restricted = [&](double alpha) {
    const auto top = top_retweeted_seeds(events, seeds, alpha);
    std::set<std::string> chosen(top.begin(), top.end());
    SampleSpec step;
    step.kind = SampleKind::TopSeedFraction;
    step.fraction = alpha;
    step.seed_ids = chosen;
    return std::make_pair(restrict_to(events, chosen, step), chosen);
  };

  Reference ref = [&] {
    try {
      auto [full, chosen] = restricted(1.0);
      return reference_run(full, chosen, popts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ReferenceFailed) throw;
      throw Error(ErrorCode::ReferenceFailed, e.what());
    }
  }();

  SweepResult result;
  result.reference_scores = ref.output.scores;
  result.reference_report = ref.output.report;
  result.config.sample_template.kind = SampleKind::TopSeedFraction;
  result.config.sample_template.seed_ids = seeds;
  result.config.sample_template.rng_seed = rng.seed();
  result.config.sample_template.rng_stream = rng.stream_id();
  result.config.fractions = alphas;
  result.config.replicates = 1;
  result.config.rng_seed = rng.seed();
  result.config.rng_stream = rng.stream_id();
  result.config.n_bootstrap = options.n_bootstrap;
  result.config.anchor = options.anchor;

  result.points.resize(alphas.size());
  parallel_for(alphas.size(), options.threads, [&](std::size_t task) {
    auto [sample, chosen] = restricted(alphas[task]);
    SweepPoint point =
        evaluate_point(sample, chosen, ref.user_scores, ref.output.report.n_retweets, popts);
    point.fraction = alphas[task];
    point.replicate = 0;
    result.points[task] = std::move(point);
  });
  return result;
}

KeywordExperimentResult run_keyword_experiment(const EventSet& events,
                                               const KeywordSet& keywords,
                                               const std::set<std::string>& seeds,
                                               const RngStream& rng,
                                               const ExperimentOptions& options) {
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed set");
  const PipelineOptions popts = pipeline_options(options, rng, weak_components(events).nodes);
  const Reference baseline = reference_run(filter_by_seeds(events, seeds), seeds, popts);

  const EventSet filtered = filter_by_keywords(events, keywords);
  std::set<std::string> retweeted;
  for (const auto& e : filtered.events()) retweeted.insert(e.influencer_id);

  KeywordExperimentResult result;
  result.n_filtered = filtered.size();
  result.baseline = baseline.output.scores;
  result.with_seeds =
      run_branch(filter_by_seeds(filtered, seeds), seeds, baseline.user_scores, popts);
  result.all_influencers = run_branch(filtered, retweeted, baseline.user_scores, popts);
  return result;
}

KeywordBiasResult keyword_bias_split(const EventSet& events, const KeywordSet& keywords,
                                     const IdeologyScores& scores, std::size_t min_support) {
  if (!scores.normalized) throw Error(ErrorCode::InvalidArgument, "scores must be normalized");
  if (min_support == 0) throw Error(ErrorCode::InvalidArgument, "min_support must be >= 1");

  std::vector<KeywordStats> stats(keywords.size());
  for (const auto& e : events.events()) {
    auto it = scores.user_scores.find(e.retweeter_id);
    if (it == scores.user_scores.end()) continue;
    for (std::size_t t : keywords.matching_terms(e.text)) {
      stats[t].scores.push_back(it->second);
    }
  }

  KeywordBiasResult result;
  result.match_mode = keywords.mode();
  for (std::size_t t = 0; t < keywords.size(); ++t) {
    KeywordStats& s = stats[t];
    s.n_tweets = s.scores.size();
    if (s.n_tweets < min_support) continue;
    double sum = 0.0;
    for (double x : s.scores) sum += x;
    s.mean_ideology = sum / static_cast<double>(s.n_tweets);
    const std::string& term = keywords.terms()[t];
    (s.mean_ideology <= 0.0 ? result.left_set : result.right_set).push_back(term);
    result.per_keyword.emplace(term, std::move(s));
  }
  if (result.per_keyword.empty()) {
    throw Error(ErrorCode::NoScoredTweets, "no keyword reaches min_support scored tweets");
  }
  std::sort(result.left_set.begin(), result.left_set.end());
  std::sort(result.right_set.begin(), result.right_set.end());
  return result;
}

BiasedComparison run_biased_keyword_comparison(const EventSet& events,
                                               const KeywordBiasResult& bias,
                                               const std::set<std::string>& seeds,
                                               const IdeologyScores& baseline,
                                               const RngStream& rng,
                                               const ExperimentOptions& options) {
  if (bias.left_set.empty() || bias.right_set.empty()) {
    throw Error(ErrorCode::InvalidArgument, "both keyword sides must be non-empty");
  }
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed set");
  const PipelineOptions popts = pipeline_options(options, rng, weak_components(events).nodes);
  const std::vector<double> reference = user_score_values(baseline);

  auto run_side = [&](std::vector<std::string> terms) {
    BiasedSample side;
    const KeywordSet kw(terms, bias.match_mode);
    side.keywords = kw.terms();
    const EventSet sample = filter_by_seeds(filter_by_keywords(events, kw), seeds);
    side.n_events = sample.size();
    std::set<std::string> present;
    for (const auto& e : sample.events()) present.insert(e.retweeter_id);
    for (const auto& id : present) {
      if (auto it = baseline.user_scores.find(id); it != baseline.user_scores.end()) {
        side.baseline_scores.push_back(it->second);
      }
    }
    side.pipeline = run_branch(sample, seeds, reference, popts);
    return side;
  };

  std::vector<std::string> union_terms = bias.left_set;
  union_terms.insert(union_terms.end(), bias.right_set.begin(), bias.right_set.end());

  BiasedComparison out;
  out.left = run_side(bias.left_set);
  out.right = run_side(bias.right_set);
  out.all = run_side(std::move(union_terms));
  return out;
}

double central_mass(std::span<const double> values, double half_width) {
  if (values.empty()) return 0.0;
  const auto inside = std::count_if(values.begin(), values.end(),
                                    [&](double x) { return std::abs(x) <= half_width; });
  return static_cast<double>(inside) / static_cast<double>(values.size());
}

}  // namespace polarsample
