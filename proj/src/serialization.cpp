#include "polarsample/serialization.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>

#include <fmt/format.h>

namespace polarsample {
namespace {

ErrorCode error_code_from_string(std::string_view name) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::ConfigInvalid); ++c) {
    const auto code = static_cast<ErrorCode>(c);
    if (to_string(code) == name) return code;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown error code '" + std::string(name) + "'");
}

}  // namespace

void to_json(Json& j, const RetweetEvent& e) {
  j = Json{{"tweet_id", e.tweet_id},
           {"retweeter_id", e.retweeter_id},
           {"influencer_id", e.influencer_id},
           {"timestamp", e.timestamp},
           {"text", e.text}};
}

void from_json(const Json& j, RetweetEvent& e) {
  e.tweet_id = j.at("tweet_id").get<std::string>();
  e.retweeter_id = j.at("retweeter_id").get<std::string>();
  e.influencer_id = j.at("influencer_id").get<std::string>();
  e.timestamp = j.value("timestamp", std::int64_t{0});
  e.text = j.value("text", std::string{});
}

void to_json(Json& j, const SampleSpec& s) {
  j = Json{{"kind", to_string(s.kind)},
           {"fraction", s.fraction},
           {"keywords", s.keywords},
           {"seed_ids", s.seed_ids},
           {"rng_seed", s.rng_seed},
           {"rng_stream", s.rng_stream}};
}

void from_json(const Json& j, SampleSpec& s) {
  s.kind = sample_kind_from_string(j.at("kind").get<std::string>());
  s.fraction = j.value("fraction", 1.0);
  s.keywords = j.value("keywords", std::vector<std::string>{});
  s.seed_ids = j.value("seed_ids", std::set<std::string>{});
  s.rng_seed = j.value("rng_seed", std::uint64_t{0});
  s.rng_stream = j.value("rng_stream", std::uint64_t{0});
}

void to_json(Json& j, const EventSet& s) {
  j = Json{{"events", s.events()}, {"provenance", s.provenance()}};
}

void from_json(const Json& j, EventSet& s) {
  s = EventSet(j.at("events").get<std::vector<RetweetEvent>>(),
               j.value("provenance", std::vector<SampleSpec>{}));
}

void to_json(Json& j, const IdeologyScores& s) {
  j = Json{{"user_scores", s.user_scores},
           {"influencer_scores", s.influencer_scores},
           {"singular_values", s.singular_values},
           {"normalized", s.normalized}};
}

void from_json(const Json& j, IdeologyScores& s) {
  s.user_scores = j.at("user_scores").get<std::map<std::string, double>>();
  s.influencer_scores = j.at("influencer_scores").get<std::map<std::string, double>>();
  s.singular_values = j.at("singular_values").get<std::vector<double>>();
  s.normalized = j.at("normalized").get<bool>();
}

void to_json(Json& j, const DipResult& d) {
  j = Json{{"statistic", d.statistic},
           {"p_value", d.p_value},
           {"n", d.n},
           {"n_bootstrap", d.n_bootstrap},
           {"verdict", to_string(d.verdict)}};
}

void from_json(const Json& j, DipResult& d) {
  d.statistic = j.at("statistic").get<double>();
  d.p_value = j.at("p_value").get<double>();
  d.n = j.at("n").get<std::size_t>();
  d.n_bootstrap = j.at("n_bootstrap").get<std::size_t>();
  d.verdict = verdict_from_string(j.at("verdict").get<std::string>());
}

void to_json(Json& j, const MetricsReport& r) {
  j = Json{{"dip", r.dip},
           {"wasserstein_to_reference", r.wasserstein_to_reference},
           {"lwcc_relative", r.lwcc_relative},
           {"n_retweets", r.n_retweets},
           {"n_users", r.n_users},
           {"n_influencers", r.n_influencers}};
}

void from_json(const Json& j, MetricsReport& r) {
  r.dip = j.at("dip").get<DipResult>();
  r.wasserstein_to_reference = j.at("wasserstein_to_reference").get<double>();
  r.lwcc_relative = j.at("lwcc_relative").get<double>();
  r.n_retweets = j.at("n_retweets").get<std::size_t>();
  r.n_users = j.at("n_users").get<std::size_t>();
  r.n_influencers = j.at("n_influencers").get<std::size_t>();
}

void to_json(Json& j, const SweepPoint& p) {
  j = Json{{"fraction", p.fraction},
           {"replicate", p.replicate},
           {"n_retweets", p.n_retweets},
           {"lwcc_relative", p.lwcc_relative ? Json(*p.lwcc_relative) : Json(nullptr)},
           {"report", p.report ? Json(*p.report) : Json(nullptr)},
           {"failure", p.failure ? Json(to_string(*p.failure)) : Json(nullptr)},
           {"fragmented", p.fragmented}};
}

void from_json(const Json& j, SweepPoint& p) {
  p.fraction = j.at("fraction").get<double>();
  p.replicate = j.at("replicate").get<std::size_t>();
  p.n_retweets = j.at("n_retweets").get<std::size_t>();
  p.lwcc_relative.reset();
  if (!j.at("lwcc_relative").is_null()) p.lwcc_relative = j.at("lwcc_relative").get<double>();
  p.report.reset();
  if (!j.at("report").is_null()) p.report = j.at("report").get<MetricsReport>();
  p.failure.reset();
  if (!j.at("failure").is_null()) {
    p.failure = error_code_from_string(j.at("failure").get<std::string>());
  }
  p.fragmented = j.at("fragmented").get<bool>();
}

void to_json(Json& j, const SweepConfig& c) {
  j = Json{{"sample_template", c.sample_template},
           {"fractions", c.fractions},
           {"replicates", c.replicates},
           {"rng_seed", c.rng_seed},
           {"rng_stream", c.rng_stream},
           {"n_bootstrap", c.n_bootstrap},
           {"anchor", c.anchor}};
}

void from_json(const Json& j, SweepConfig& c) {
  c.sample_template = j.at("sample_template").get<SampleSpec>();
  c.fractions = j.at("fractions").get<std::vector<double>>();
  c.replicates = j.at("replicates").get<std::size_t>();
  c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  c.rng_stream = j.at("rng_stream").get<std::uint64_t>();
  c.n_bootstrap = j.at("n_bootstrap").get<std::size_t>();
  c.anchor = j.at("anchor").get<std::set<std::string>>();
}

void to_json(Json& j, const SweepResult& r) {
  j = Json{{"config", r.config},
           {"reference_report", r.reference_report},
           {"reference_scores", r.reference_scores},
           {"points", r.points}};
}

void from_json(const Json& j, SweepResult& r) {
  r.config = j.at("config").get<SweepConfig>();
  r.reference_report = j.at("reference_report").get<MetricsReport>();
  r.reference_scores = j.at("reference_scores").get<IdeologyScores>();
  r.points = j.at("points").get<std::vector<SweepPoint>>();
}

void to_json(Json& j, const Popularity& p) {
  if (p.kind == Popularity::Kind::Uniform) {
    j = Json{{"kind", "uniform"}};
  } else {
    j = Json{{"kind", "zipf"}, {"exponent", p.exponent}};
  }
}

void from_json(const Json& j, Popularity& p) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform") {
    p = Popularity::uniform();
  } else if (kind == "zipf") {
    p = Popularity::zipf(j.value("exponent", 1.0));
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown popularity kind '" + kind + "'");
  }
}

void to_json(Json& j, const SyntheticConfig& c) {
  j = Json{{"n_users", c.n_users},
           {"n_influencers", c.n_influencers},
           {"n_hubs", c.n_hubs},
           {"n_events", c.n_events},
           {"faction_split", c.faction_split},
           {"cross_rate", c.cross_rate},
           {"moderate_share", c.moderate_share},
           {"moderate_hub_rate", c.moderate_hub_rate ? Json(*c.moderate_hub_rate) : Json()},
           {"influencer_popularity", c.influencer_popularity},
           {"user_activity", c.user_activity},
           {"vocab_left", c.vocab_left},
           {"vocab_right", c.vocab_right},
           {"vocab_neutral", c.vocab_neutral},
           {"rng_seed", c.rng_seed}};
}

void from_json(const Json& j, SyntheticConfig& c) {
  // Missing keys keep their defaults so partial config sections work.
  c.n_users = j.value("n_users", c.n_users);
  c.n_influencers = j.value("n_influencers", c.n_influencers);
  c.n_hubs = j.value("n_hubs", c.n_hubs);
  c.n_events = j.value("n_events", c.n_events);
  c.faction_split = j.value("faction_split", c.faction_split);
  c.cross_rate = j.value("cross_rate", c.cross_rate);
  c.moderate_share = j.value("moderate_share", c.moderate_share);
  if (j.contains("moderate_hub_rate") && !j.at("moderate_hub_rate").is_null()) {
    c.moderate_hub_rate = j.at("moderate_hub_rate").get<double>();
  }
  if (j.contains("influencer_popularity")) {
    c.influencer_popularity = j.at("influencer_popularity").get<Popularity>();
  }
  if (j.contains("user_activity")) c.user_activity = j.at("user_activity").get<Popularity>();
  c.vocab_left = j.value("vocab_left", c.vocab_left);
  c.vocab_right = j.value("vocab_right", c.vocab_right);
  c.vocab_neutral = j.value("vocab_neutral", c.vocab_neutral);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
}

Json rng_to_json(const RngStream& rng) {
  return Json{{"seed", rng.seed()}, {"stream_id", rng.stream_id()}};
}

RngStream rng_from_json(const Json& j) {
  return RngStream(j.at("seed").get<std::uint64_t>(), j.at("stream_id").get<std::uint64_t>());
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "fraction,replicate,n_retweets,dip_D,dip_p,verdict,wasserstein,lwcc,fragmented\n";
  for (const auto& p : result.points) {
    const std::string lwcc = p.lwcc_relative ? fmt::format("{}", *p.lwcc_relative) : "";
    if (p.report) {
      const auto& r = *p.report;
      out << fmt::format("{},{},{},{},{},{},{},{},{}\n", p.fraction, p.replicate, p.n_retweets,
                         r.dip.statistic, r.dip.p_value, to_string(r.dip.verdict),
                         r.wasserstein_to_reference, lwcc, p.fragmented ? 1 : 0);
    } else {
      out << fmt::format("{},{},{},,,failed:{},,{},{}\n", p.fraction, p.replicate,
                         p.n_retweets, to_string(p.failure.value_or(ErrorCode::InvalidArgument)),
                         lwcc, p.fragmented ? 1 : 0);
    }
  }
}

void write_sweep_summary_csv(std::ostream& out, const SweepResult& result) {
  struct Range {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    void add(double v) {
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++n;
    }
    std::string cells() const {
      if (n == 0) return ",,";
      return fmt::format("{},{},{}", sum / static_cast<double>(n), lo, hi);
    }
  };
  struct Row {
    std::size_t ok = 0, failed = 0, multimodal = 0, fragmented = 0;
    Range retweets, dip, wasserstein, lwcc;
  };
  std::map<double, Row> rows;
  for (const auto& p : result.points) {
    Row& row = rows[p.fraction];
    row.retweets.add(static_cast<double>(p.n_retweets));
    if (p.lwcc_relative) row.lwcc.add(*p.lwcc_relative);
    if (p.fragmented) ++row.fragmented;
    if (p.report) {
      ++row.ok;
      if (p.report->dip.verdict == Verdict::Multimodal) ++row.multimodal;
      row.dip.add(p.report->dip.statistic);
      row.wasserstein.add(p.report->wasserstein_to_reference);
    } else {
      ++row.failed;
    }
  }
  out << "fraction,n_ok,n_failed,n_multimodal,n_fragmented,"
         "n_retweets_mean,n_retweets_min,n_retweets_max,dip_D_mean,dip_D_min,dip_D_max,"
         "wasserstein_mean,wasserstein_min,wasserstein_max,lwcc_mean,lwcc_min,lwcc_max\n";
  for (const auto& [fraction, row] : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", fraction, row.ok, row.failed,
                       row.multimodal, row.fragmented, row.retweets.cells(), row.dip.cells(),
                       row.wasserstein.cells(), row.lwcc.cells());
  }
}

}  // namespace polarsample
