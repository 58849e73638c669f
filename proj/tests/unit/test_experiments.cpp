#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "polarsample/experiments.hpp"
#include "polarsample/serialization.hpp"
#include "polarsample/synthetic.hpp"
#include "support.hpp"

using namespace polarsample;
using testing::event;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

struct Fixture {
  SyntheticConfig config;
  SyntheticData data;
  std::set<std::string> seeds;
  ExperimentOptions options;
};

Fixture polarized(std::size_t users = 400, std::size_t events = 8000) {
  Fixture f;
  f.config = testing::synth_config(users, 20, events);
  f.config.cross_rate = 0.02;
  f.data = generate(f.config, RngStream(77, 0));
  f.seeds = f.data.truth.political_influencers();
  f.options.anchor = f.data.truth.influencers_of(Faction::Left);
  f.options.n_bootstrap = 200;
  return f;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("random sweep: full fraction reproduces the reference") {
  const Fixture f = polarized();
  const RngStream rng(3, 0);
  const SweepResult r = run_random_sweep(f.data.events, f.seeds, {1.0, 0.5}, 2, rng, f.options);
  REQUIRE(r.points.size() == 4);
  CHECK(r.points[0].fraction == 0.5);
  CHECK(r.points[1].replicate == 1);
  CHECK(r.points[3].fraction == 1.0);
  CHECK(r.reference_report.dip.verdict == Verdict::Multimodal);
  for (const auto& p : r.points) {
    REQUIRE_FALSE(p.failed());
    if (p.fraction == 1.0) {
      CHECK(p.report->wasserstein_to_reference == 0.0);
      CHECK(p.report->dip == r.reference_report.dip);
      CHECK(p.n_retweets == r.reference_report.n_retweets);
    } else {
      CHECK(p.report->wasserstein_to_reference > 0.0);
      CHECK(p.n_retweets == doctest::Approx(r.reference_report.n_retweets / 2.0).epsilon(0.01));
    }
    const bool expect_fragmented =
        p.lwcc_relative.value_or(0.0) < kFragmentedLwcc &&
        static_cast<double>(p.n_retweets) <
            kFragmentedRetweetShare * static_cast<double>(r.reference_report.n_retweets);
    CHECK(p.fragmented == expect_fragmented);
  }
  CHECK(r.config.fractions == std::vector<double>{0.5, 1.0});
  CHECK(r.config.anchor == f.options.anchor);
}

TEST_CASE("random sweep: determinism and thread independence") {
  const Fixture f = polarized(300, 5000);
  const RngStream rng(4, 0);
  const std::vector<double> fractions{0.05, 0.2, 1.0};
  const SweepResult a = run_random_sweep(f.data.events, f.seeds, fractions, 3, rng, f.options);
  const SweepResult b = run_random_sweep(f.data.events, f.seeds, fractions, 3, rng, f.options);
  CHECK(Json(a).dump() == Json(b).dump());

  ExperimentOptions threaded = f.options;
  threaded.threads = 4;
  const SweepResult c = run_random_sweep(f.data.events, f.seeds, fractions, 3, rng, threaded);
  CHECK(Json(a).dump() == Json(c).dump());

  // Points are keyed by fraction value: a wider grid leaves them unchanged.
  const SweepResult wide =
      run_random_sweep(f.data.events, f.seeds, {0.05, 0.1, 0.2, 1.0}, 3, rng, f.options);
  for (const auto& p : a.points) {
    const auto it = std::find_if(wide.points.begin(), wide.points.end(), [&](const SweepPoint& q) {
      return q.fraction == p.fraction && q.replicate == p.replicate;
    });
    REQUIRE(it != wide.points.end());
    CHECK(*it == p);
  }

  const SweepResult other =
      run_random_sweep(f.data.events, f.seeds, fractions, 3, RngStream(5, 0), f.options);
  CHECK(Json(a).dump() != Json(other).dump());
}

TEST_CASE("random sweep: argument and reference errors") {
  const Fixture f = polarized(100, 2000);
  const RngStream rng(1, 0);
  CHECK(code_of([&] { run_random_sweep(f.data.events, f.seeds, {0.0}, 1, rng, f.options); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { run_random_sweep(f.data.events, f.seeds, {1.5}, 1, rng, f.options); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { run_random_sweep(f.data.events, f.seeds, {1.0}, 0, rng, f.options); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { run_random_sweep(f.data.events, {"nobody"}, {1.0}, 1, rng, f.options); }) ==
        ErrorCode::ReferenceFailed);
  ExperimentOptions wrong_anchor = f.options;
  wrong_anchor.anchor = {"nobody"};
  CHECK(code_of([&] { run_random_sweep(f.data.events, f.seeds, {1.0}, 1, rng, wrong_anchor); }) ==
        ErrorCode::ReferenceFailed);
}

TEST_CASE("random sweep: tiny samples fail instead of aborting") {
  const Fixture f = polarized(300, 3000);
  const SweepResult r =
      run_random_sweep(f.data.events, f.seeds, {0.001, 1.0}, 3, RngStream(2, 0), f.options);
  std::size_t failed = 0;
  for (const auto& p : r.points) {
    if (p.fraction == 0.001) {
      failed += p.failed();
      CHECK(p.n_retweets == 3);
    }
  }
  CHECK(failed == 3);
}

TEST_CASE("seed sweep: reference, degeneracy and nesting") {
  const Fixture f = polarized();
  const RngStream rng(6, 0);
  const SweepResult r =
      run_seed_sweep(f.data.events, f.seeds, {0.01, 0.3, 0.6, 1.0}, rng, f.options);
  REQUIRE(r.points.size() == 4);
  // One seed out of twenty leaves a single column.
  REQUIRE(r.points[0].failed());
  CHECK(*r.points[0].failure == ErrorCode::MatrixDegenerate);
  CHECK(r.points[3].report->wasserstein_to_reference == 0.0);
  CHECK(r.points[3].report->dip == r.reference_report.dip);
  for (std::size_t k = 1; k < r.points.size(); ++k) {
    CHECK(r.points[k].n_retweets >= r.points[k - 1].n_retweets);
    CHECK(r.points[k].replicate == 0);
  }
  for (std::size_t k = 1; k < 3; ++k) {
    REQUIRE_FALSE(r.points[k].failed());
    CHECK(r.points[k].report->n_influencers <= r.points[k + 1].report->n_influencers);
  }

  ExperimentOptions threaded = f.options;
  threaded.threads = 3;
  CHECK(Json(run_seed_sweep(f.data.events, f.seeds, {0.01, 0.3, 0.6, 1.0}, rng, threaded)).dump() ==
        Json(r).dump());
  CHECK(code_of([&] { run_seed_sweep(f.data.events, {}, {1.0}, rng, f.options); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("keyword experiment: empty and identity filters") {
  const Fixture f = polarized(300, 5000);
  const RngStream rng(7, 0);
  const KeywordExperimentResult none =
      run_keyword_experiment(f.data.events, KeywordSet({"zzzunused"}), f.seeds, rng, f.options);
  CHECK(none.n_filtered == 0);
  CHECK(none.with_seeds.failure == ErrorCode::EmptyMatrix);
  CHECK(none.all_influencers.failure == ErrorCode::EmptyMatrix);

  std::vector<std::string> every = f.config.vocab_left;
  every.insert(every.end(), f.config.vocab_right.begin(), f.config.vocab_right.end());
  const KeywordExperimentResult all =
      run_keyword_experiment(f.data.events, KeywordSet(every), f.seeds, rng, f.options);
  CHECK(all.n_filtered == f.data.events.size());
  REQUIRE(all.with_seeds.ok());
  CHECK(all.with_seeds.output->scores == all.baseline);
  CHECK(all.with_seeds.output->report.wasserstein_to_reference == 0.0);
  // Without hubs the retweeted accounts are exactly the seeds.
  REQUIRE(all.all_influencers.ok());
  CHECK(all.all_influencers.output->scores == all.baseline);
}

TEST_CASE("keyword_bias_split: sign rule and tie") {
  IdeologyScores s;
  s.normalized = true;
  s.user_scores = {{"a", -1.2}, {"b", -0.8}, {"c", 0.5}, {"d", -0.5}};
  const EventSet events({event("1", "a", "p", 1, "alpha"), event("2", "b", "p", 2, "alpha zero"),
                         event("3", "c", "p", 3, "zero beta"), event("4", "d", "p", 4, "zero"),
                         event("5", "x", "p", 5, "beta"), event("6", "b", "p", 6, "other")});
  const KeywordSet kw({"alpha", "zero", "beta"});
  const KeywordBiasResult r = keyword_bias_split(events, kw, s, 1);
  CHECK(r.per_keyword.at("alpha").mean_ideology == doctest::Approx(-1.0));
  CHECK(r.per_keyword.at("alpha").n_tweets == 2);
  CHECK(r.per_keyword.at("zero").mean_ideology == doctest::Approx(-0.8 / 3.0));
  // The unscored retweeter "x" is ignored.
  CHECK(r.per_keyword.at("beta").n_tweets == 1);
  CHECK(r.left_set == std::vector<std::string>{"alpha", "zero"});
  CHECK(r.right_set == std::vector<std::string>{"beta"});

  IdeologyScores tie = s;
  tie.user_scores = {{"a", -1.0}, {"b", 1.0}};
  const KeywordBiasResult t = keyword_bias_split(
      EventSet({event("1", "a", "p", 1, "t"), event("2", "b", "p", 2, "t")}), KeywordSet({"t"}),
      tie, 1);
  CHECK(t.per_keyword.at("t").mean_ideology == 0.0);
  CHECK(t.left_set == std::vector<std::string>{"t"});
  CHECK(t.right_set.empty());

  CHECK(code_of([&] { keyword_bias_split(events, kw, s, 4); }) == ErrorCode::NoScoredTweets);
  CHECK(code_of([&] { keyword_bias_split(events, kw, s, 0); }) == ErrorCode::InvalidArgument);
  IdeologyScores raw = s;
  raw.normalized = false;
  CHECK(code_of([&] { keyword_bias_split(events, kw, raw, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("keyword bias: planted vocabularies and shifted samples") {
  const Fixture f = polarized();
  const RngStream rng(8, 0);
  PipelineOptions popts;
  popts.anchor = f.options.anchor;
  popts.n_bootstrap = 100;
  const IdeologyScores baseline =
      run_pipeline(filter_by_seeds(f.data.events, f.seeds), f.seeds, {}, popts).scores;

  std::vector<std::string> terms = f.config.vocab_left;
  terms.insert(terms.end(), f.config.vocab_right.begin(), f.config.vocab_right.end());
  terms.insert(terms.end(), f.config.vocab_neutral.begin(), f.config.vocab_neutral.end());
  const KeywordSet kw(terms);
  const KeywordBiasResult bias = keyword_bias_split(f.data.events, kw, baseline);
  CHECK(bias.left_set == sorted(f.config.vocab_left));
  CHECK(bias.right_set == sorted(f.config.vocab_right));

  const BiasedComparison cmp =
      run_biased_keyword_comparison(f.data.events, bias, f.seeds, baseline, rng, f.options);
  CHECK(mean(cmp.left.baseline_scores) < mean(cmp.all.baseline_scores));
  CHECK(mean(cmp.all.baseline_scores) < mean(cmp.right.baseline_scores));
  CHECK(cmp.all.n_events == f.data.events.size());

  std::vector<std::string> both = bias.left_set;
  both.insert(both.end(), bias.right_set.begin(), bias.right_set.end());
  const KeywordExperimentResult direct =
      run_keyword_experiment(f.data.events, KeywordSet(both), f.seeds, rng, f.options);
  REQUIRE(cmp.all.pipeline.ok());
  REQUIRE(direct.with_seeds.ok());
  CHECK(cmp.all.pipeline.output->scores == direct.with_seeds.output->scores);

  KeywordBiasResult one_sided = bias;
  one_sided.right_set.clear();
  CHECK(code_of([&] {
          run_biased_keyword_comparison(f.data.events, one_sided, f.seeds, baseline, rng,
                                        f.options);
        }) == ErrorCode::InvalidArgument);
}

TEST_CASE("central_mass") {
  const std::vector<double> v{-2.0, -0.5, 0.0, 0.4, 0.6, 3.0};
  CHECK(central_mass(v) == doctest::Approx(0.5));
  CHECK(central_mass(v, 1.0) == doctest::Approx(4.0 / 6.0));
  CHECK(central_mass({}) == 0.0);
}

TEST_CASE("lwcc modes") {
  CHECK(lwcc_mode_from_string(to_string(LwccMode::ReferenceGraph)) == LwccMode::ReferenceGraph);
  CHECK(lwcc_mode_from_string(to_string(LwccMode::SampledGraph)) == LwccMode::SampledGraph);
  CHECK_THROWS_AS(lwcc_mode_from_string("bogus"), Error);

  const Fixture f = polarized(300, 3000);
  ExperimentOptions ref = f.options;
  ref.lwcc_mode = LwccMode::ReferenceGraph;
  const SweepResult r =
      run_random_sweep(f.data.events, f.seeds, {0.02, 1.0}, 2, RngStream(9, 0), ref);
  const SweepResult s =
      run_random_sweep(f.data.events, f.seeds, {0.02, 1.0}, 2, RngStream(9, 0), f.options);
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    REQUIRE(r.points[k].lwcc_relative.has_value());
    CHECK(*r.points[k].lwcc_relative <= *s.points[k].lwcc_relative);
  }
  CHECK(*r.points.back().lwcc_relative == doctest::Approx(*s.points.back().lwcc_relative));
}
