#include "polarsample/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace polarsample {
namespace {

/// Inverse-CDF sampler over ranks 0..n-1.
class RankSampler {
 public:
  RankSampler(std::size_t n, const Popularity& popularity) : cdf_(n) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = popularity.kind == Popularity::Kind::Zipf
                           ? std::pow(static_cast<double>(k + 1), -popularity.exponent)
                           : 1.0;
      sum += w;
      cdf_[k] = sum;
    }
    for (double& v : cdf_) v /= sum;
  }

  std::size_t draw(RngStream& rng) const {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::size_t rounded(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

std::string draw_text(const std::vector<std::string>& vocab, RngStream& rng) {
  const std::size_t k = std::min<std::size_t>(1 + rng.uniform_index(3), vocab.size());
  std::vector<std::size_t> picked;
  while (picked.size() < k) {
    const std::size_t w = rng.uniform_index(vocab.size());
    if (std::find(picked.begin(), picked.end(), w) == picked.end()) picked.push_back(w);
  }
  std::string text;
  for (std::size_t w : picked) {
    if (!text.empty()) text += ' ';
    text += vocab[w];
  }
  return text;
}

}  // namespace

std::string_view to_string(Faction faction) {
  switch (faction) {
    case Faction::Left: return "left";
    case Faction::Right: return "right";
    case Faction::Moderate: return "moderate";
    case Faction::Neutral: return "neutral";
  }
  return "unknown";
}

void SyntheticConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::ConfigInvalid, what);
  };
  require(n_users >= 2, "n_users must be at least 2");
  require(n_influencers >= 2, "n_influencers must be at least 2");
  require(n_events >= n_users, "n_events must be at least n_users");
  require(faction_split > 0.0 && faction_split < 1.0, "faction_split must lie in (0, 1)");
  require(cross_rate >= 0.0 && cross_rate < 1.0, "cross_rate must lie in [0, 1)");
  require(moderate_share >= 0.0 && moderate_share < 1.0, "moderate_share must lie in [0, 1)");
  require(!moderate_hub_rate || (*moderate_hub_rate >= 0.0 && *moderate_hub_rate <= 1.0),
          "moderate_hub_rate must lie in [0, 1]");
  require(!moderate_hub_rate || n_hubs > 0, "moderate_hub_rate needs hubs");
  for (const Popularity* p : {&influencer_popularity, &user_activity}) {
    require(p->kind == Popularity::Kind::Uniform || p->exponent > 0.0,
            "Zipf exponent must be positive");
  }
  require(!vocab_left.empty() && !vocab_right.empty(), "faction vocabularies must be non-empty");
  require(moderate_share == 0.0 || !vocab_neutral.empty(),
          "moderates need a neutral vocabulary");
  const std::size_t n_moderate = rounded(static_cast<double>(n_users) * moderate_share);
  require(n_users - n_moderate >= 2, "need at least two partisan users");
}

std::set<std::string> GroundTruth::political_influencers() const {
  std::set<std::string> out;
  for (const auto& [id, f] : influencers) {
    if (f == Faction::Left || f == Faction::Right) out.insert(id);
  }
  return out;
}

std::set<std::string> GroundTruth::influencers_of(Faction faction) const {
  std::set<std::string> out;
  for (const auto& [id, f] : influencers) {
    if (f == faction) out.insert(id);
  }
  return out;
}

SyntheticData generate(const SyntheticConfig& config, const RngStream& rng) {
  config.validate();
  RngStream draw = rng;

  const std::size_t n_left_infl = std::clamp<std::size_t>(
      rounded(static_cast<double>(config.n_influencers) * config.faction_split), 1,
      config.n_influencers - 1);
  std::vector<std::string> left_infl;
  std::vector<std::string> right_infl;
  std::vector<std::string> hubs;
  for (std::size_t k = 0; k < n_left_infl; ++k) left_infl.push_back(fmt::format("L{:04d}", k));
  for (std::size_t k = n_left_infl; k < config.n_influencers; ++k) {
    right_infl.push_back(fmt::format("R{:04d}", k - n_left_infl));
  }
  for (std::size_t k = 0; k < config.n_hubs; ++k) hubs.push_back(fmt::format("H{:04d}", k));
  std::vector<std::string> any_target = left_infl;
  any_target.insert(any_target.end(), right_infl.begin(), right_infl.end());
  const std::size_t n_political = any_target.size();
  any_target.insert(any_target.end(), hubs.begin(), hubs.end());

  const std::size_t n_moderate =
      rounded(static_cast<double>(config.n_users) * config.moderate_share);
  const std::size_t n_partisan = config.n_users - n_moderate;
  const std::size_t n_left_users = std::clamp<std::size_t>(
      rounded(static_cast<double>(n_partisan) * config.faction_split), 1, n_partisan - 1);
  std::vector<Faction> user_faction(config.n_users, Faction::Moderate);
  std::fill_n(user_faction.begin(), n_left_users, Faction::Left);
  std::fill(user_faction.begin() + static_cast<std::ptrdiff_t>(n_left_users),
            user_faction.begin() + static_cast<std::ptrdiff_t>(n_partisan), Faction::Right);
  for (std::size_t i = config.n_users; i > 1; --i) {
    std::swap(user_faction[i - 1], user_faction[draw.uniform_index(i)]);
  }

  SyntheticData data;
  std::vector<std::string> user_ids(config.n_users);
  for (std::size_t i = 0; i < config.n_users; ++i) {
    user_ids[i] = fmt::format("u{:06d}", i);
    data.truth.users.emplace(user_ids[i], user_faction[i]);
  }
  for (const auto& id : left_infl) data.truth.influencers.emplace(id, Faction::Left);
  for (const auto& id : right_infl) data.truth.influencers.emplace(id, Faction::Right);
  for (const auto& id : hubs) data.truth.influencers.emplace(id, Faction::Neutral);

  const RankSampler activity(config.n_users, config.user_activity);
  const RankSampler left_pop(left_infl.size(), config.influencer_popularity);
  const RankSampler right_pop(right_infl.size(), config.influencer_popularity);

  std::vector<RetweetEvent> events;
  events.reserve(config.n_events);
  for (std::size_t t = 0; t < config.n_events; ++t) {
    const std::size_t user = activity.draw(draw);
    RetweetEvent e;
    e.tweet_id = fmt::format("t{:08d}", t);
    e.retweeter_id = user_ids[user];
    e.timestamp = static_cast<std::int64_t>(t + 1);
    const Faction faction = user_faction[user];
    if (faction == Faction::Moderate) {
      if (!config.moderate_hub_rate) {
        e.influencer_id = any_target[draw.uniform_index(any_target.size())];
      } else if (draw.uniform() < *config.moderate_hub_rate) {
        e.influencer_id = hubs[draw.uniform_index(hubs.size())];
      } else {
        e.influencer_id = any_target[draw.uniform_index(n_political)];
      }
      e.text = draw_text(config.vocab_neutral, draw);
    } else {
      const bool cross = draw.uniform() < config.cross_rate;
      const bool left_side = (faction == Faction::Left) != cross;
      if (left_side) {
        e.influencer_id = left_infl[left_pop.draw(draw)];
        e.text = draw_text(config.vocab_left, draw);
      } else {
        e.influencer_id = right_infl[right_pop.draw(draw)];
        e.text = draw_text(config.vocab_right, draw);
      }
    }
    events.push_back(std::move(e));
  }
  data.events = EventSet(std::move(events));
  return data;
}

void write_events_jsonl(std::ostream& out, const EventSet& events) {
  for (const auto& e : events.events()) {
    nlohmann::ordered_json line;
    line["tweet_id"] = e.tweet_id;
    line["retweeter_id"] = e.retweeter_id;
    line["influencer_id"] = e.influencer_id;
    line["timestamp"] = e.timestamp;
    line["text"] = e.text;
    out << line.dump() << '\n';
  }
}

void write_labels_csv(std::ostream& out, const GroundTruth& truth) {
  out << "id,faction\n";
  for (const auto& [id, f] : truth.users) out << id << ',' << to_string(f) << '\n';
  for (const auto& [id, f] : truth.influencers) out << id << ',' << to_string(f) << '\n';
}

}  // namespace polarsample
