#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polarsample/core_types.hpp"

namespace polarsample {

struct Popularity {
  enum class Kind { Uniform, Zipf };
  Kind kind = Kind::Uniform;
  double exponent = 1.0;

  static Popularity uniform() { return {}; }
  static Popularity zipf(double s) { return {Kind::Zipf, s}; }

  friend bool operator==(const Popularity&, const Popularity&) = default;
};

/// Planted two-faction retweet model.
///
/// Partisan users retweet their own faction's influencers with probability
/// 1 - cross_rate. Moderates pick uniformly among all influencers, which
/// include the optional neutral hubs; hubs are never retweeted by partisans.
/// With moderate_hub_rate set, a moderate's retweet goes to a uniformly
/// chosen hub with that probability and to a politician otherwise.
struct SyntheticConfig {
  std::size_t n_users = 2000;
  std::size_t n_influencers = 100;
  std::size_t n_hubs = 0;
  std::size_t n_events = 40000;
  double faction_split = 0.5;
  double cross_rate = 0.02;
  double moderate_share = 0.0;
  std::optional<double> moderate_hub_rate;
  Popularity influencer_popularity;
  Popularity user_activity;
  std::vector<std::string> vocab_left{"#left", "reform", "equality", "union", "climate"};
  std::vector<std::string> vocab_right{"#right", "tradition", "sovereignty", "family",
                                       "security"};
  std::vector<std::string> vocab_neutral{"election", "vote", "government", "debate"};
  std::uint64_t rng_seed = 1;

  /// Throws ConfigInvalid.
  void validate() const;

  friend bool operator==(const SyntheticConfig&, const SyntheticConfig&) = default;
};

enum class Faction { Left, Right, Moderate, Neutral };

std::string_view to_string(Faction faction);

struct GroundTruth {
  std::map<std::string, Faction> users;
  std::map<std::string, Faction> influencers;

  /// Politicians: left and right influencers, excluding hubs.
  std::set<std::string> political_influencers() const;
  std::set<std::string> influencers_of(Faction faction) const;
};

struct SyntheticData {
  EventSet events;
  GroundTruth truth;
};

/// Deterministic in (config, rng). Text carries 1-3 terms from the
/// vocabulary of the retweeted side; moderates' retweets carry neutral terms.
SyntheticData generate(const SyntheticConfig& config, const RngStream& rng);

/// One JSON object per line with the ingestion field names.
void write_events_jsonl(std::ostream& out, const EventSet& events);

/// "id,faction" rows: users, then influencers.
void write_labels_csv(std::ostream& out, const GroundTruth& truth);

}  // namespace polarsample
