#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "polarsample/experiments.hpp"
#include "polarsample/ingestion.hpp"
#include "polarsample/synthetic.hpp"
#include "support.hpp"

using namespace polarsample;

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

// Seed pipeline up to oriented, normalized scores.
IdeologyScores score(const SyntheticData& data) {
  const auto seeds = data.truth.political_influencers();
  const InteractionMatrix m =
      prune_single_influencer_users(build_matrix(filter_by_seeds(data.events, seeds), seeds));
  return sign_convention(normalize_scores(correspondence_analysis(m)),
                         data.truth.influencers_of(Faction::Left));
}

double sign_agreement(const SyntheticData& data, const IdeologyScores& scores) {
  std::size_t agree = 0;
  for (const auto& [id, x] : scores.user_scores) {
    const Faction f = data.truth.users.at(id);
    agree += (f == Faction::Left && x < 0.0) || (f == Faction::Right && x > 0.0);
  }
  return static_cast<double>(agree) / static_cast<double>(scores.user_scores.size());
}

}  // namespace

TEST_CASE("synthetic: separable case is recovered exactly") {
  SyntheticConfig c = testing::synth_config(400, 20, 8000);
  c.cross_rate = 0.0;
  const SyntheticData data = generate(c, RngStream(11, 0));
  const IdeologyScores s = score(data);
  const auto users = user_score_values(s);
  const std::set<double> distinct(users.begin(), users.end());
  REQUIRE(distinct.size() == 2);
  CHECK(*distinct.begin() < 0.0);
  CHECK(*distinct.rbegin() > 0.0);
  CHECK(sign_agreement(data, s) == 1.0);
}

TEST_CASE("synthetic: labels are recovered under light crossing") {
  for (double cross : {0.01, 0.03, 0.05}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SyntheticConfig c = testing::synth_config(300, 20, 15000);
      c.cross_rate = cross;
      const SyntheticData data = generate(c, RngStream(seed, 0));
      CHECK(sign_agreement(data, score(data)) >= 0.99);
    }
  }
}

TEST_CASE("synthetic: null model shows no bimodality") {
  std::size_t rejected = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticConfig c = testing::synth_config(2000, 100, 20000);
    c.cross_rate = 0.5;
    const SyntheticData data = generate(c, RngStream(seed, 0));
    const auto users = user_score_values(score(data));
    const DipResult dip = dip_test(users, 500, RngStream(seed, 1));
    rejected += dip.verdict == Verdict::Multimodal;
  }
  CHECK(rejected == 0);
}

TEST_CASE("synthetic: Zipf popularity fits its target distribution") {
  SyntheticConfig c = testing::synth_config(2000, 40, 100000);
  c.cross_rate = 0.0;
  c.influencer_popularity = Popularity::zipf(1.0);
  const SyntheticData data = generate(c, RngStream(12, 0));
  for (const Faction side : {Faction::Left, Faction::Right}) {
    const auto ids = data.truth.influencers_of(side);
    std::map<std::string, double> observed;
    double total = 0.0;
    for (const auto& e : data.events.events()) {
      if (ids.contains(e.influencer_id)) {
        observed[e.influencer_id] += 1.0;
        total += 1.0;
      }
    }
    // Ids are zero-padded, so set order is popularity rank order.
    double norm = 0.0;
    for (std::size_t k = 1; k <= ids.size(); ++k) norm += 1.0 / static_cast<double>(k);
    double chi2 = 0.0;
    std::size_t rank = 1;
    for (const auto& id : ids) {
      const double expected = total / static_cast<double>(rank++) / norm;
      const double d = observed[id] - expected;
      chi2 += d * d / expected;
    }
    const boost::math::chi_squared dist(static_cast<double>(ids.size() - 1));
    CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.01);
  }
}

TEST_CASE("synthetic: configuration validation") {
  const RngStream rng(1, 0);
  auto bad = [&](auto&& mutate) {
    SyntheticConfig c = testing::synth_config(100, 10, 1000);
    mutate(c);
    return code_of([&] { generate(c, rng); });
  };
  CHECK(bad([](SyntheticConfig& c) { c.n_users = 1; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.n_influencers = 1; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.n_events = 50; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.faction_split = 1.0; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.cross_rate = 1.0; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.moderate_share = -0.1; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.influencer_popularity = Popularity::zipf(0.0); }) ==
        ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.vocab_left.clear(); }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.moderate_share = 0.99; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) { c.moderate_hub_rate = 0.5; }) == ErrorCode::ConfigInvalid);
  CHECK(bad([](SyntheticConfig& c) {
          c.n_hubs = 2;
          c.moderate_hub_rate = 1.5;
        }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("synthetic: moderate hub rate steers moderates to hubs") {
  SyntheticConfig c = testing::synth_config(1000, 20, 40000);
  c.moderate_share = 0.5;
  c.n_hubs = 5;
  c.moderate_hub_rate = 0.8;
  const SyntheticData data = generate(c, RngStream(9, 0));
  double moderate = 0.0, to_hub = 0.0;
  for (const auto& e : data.events.events()) {
    if (data.truth.users.at(e.retweeter_id) != Faction::Moderate) continue;
    moderate += 1.0;
    to_hub += data.truth.influencers.at(e.influencer_id) == Faction::Neutral;
  }
  CHECK(to_hub / moderate == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("synthetic: structure of the generated events") {
  SyntheticConfig c = testing::synth_config(200, 10, 3000);
  c.moderate_share = 0.2;
  c.n_hubs = 3;
  const SyntheticData a = generate(c, RngStream(5, 0));
  const SyntheticData b = generate(c, RngStream(5, 0));
  CHECK(a.events == b.events);
  CHECK(generate(c, RngStream(6, 0)).events != a.events);
  CHECK(a.events.size() == 3000);
  CHECK(a.truth.users.size() == 200);
  CHECK(a.truth.influencers.size() == 13);
  CHECK(a.truth.political_influencers().size() == 10);

  std::size_t moderates = 0;
  for (const auto& [id, f] : a.truth.users) moderates += f == Faction::Moderate;
  CHECK(moderates == 40);

  const std::set<std::string> left_vocab(c.vocab_left.begin(), c.vocab_left.end());
  const std::set<std::string> right_vocab(c.vocab_right.begin(), c.vocab_right.end());
  const std::set<std::string> neutral(c.vocab_neutral.begin(), c.vocab_neutral.end());
  for (const auto& e : a.events.events()) {
    const Faction user = a.truth.users.at(e.retweeter_id);
    const Faction target = a.truth.influencers.at(e.influencer_id);
    if (user != Faction::Moderate) CHECK(target != Faction::Neutral);
    const auto& vocab = user == Faction::Moderate ? neutral
                        : target == Faction::Left ? left_vocab
                                                  : right_vocab;
    std::istringstream words(e.text);
    std::size_t n = 0;
    for (std::string w; words >> w; ++n) CHECK(vocab.contains(w));
    CHECK(n >= 1);
    CHECK(n <= 3);
  }
  std::int64_t expected_ts = 1;
  for (const auto& e : a.events.events()) CHECK(e.timestamp == expected_ts++);
}

TEST_CASE("synthetic: written files pass ingestion unchanged") {
  SyntheticConfig c = testing::synth_config(50, 6, 400);
  c.moderate_share = 0.1;
  const SyntheticData data = generate(c, RngStream(8, 0));
  testing::ScratchDir dir("synth");
  std::ostringstream jsonl, labels;
  write_events_jsonl(jsonl, data.events);
  write_labels_csv(labels, data.truth);
  testing::spit(dir.path() / "events.jsonl", jsonl.str());
  const ParseResult parsed = parse_events(dir.path() / "events.jsonl", InputFormat::JsonLines);
  CHECK(parsed.errors.empty());
  CHECK(parsed.events == data.events);

  std::istringstream lines(labels.str());
  std::string line;
  std::size_t rows = 0;
  std::getline(lines, line);
  CHECK(line == "id,faction");
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 56);
}
