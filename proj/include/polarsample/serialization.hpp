#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "polarsample/core_types.hpp"
#include "polarsample/experiments.hpp"
#include "polarsample/latent_ideology.hpp"
#include "polarsample/metrics.hpp"
#include "polarsample/synthetic.hpp"

namespace polarsample {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const RetweetEvent& e);
void from_json(const Json& j, RetweetEvent& e);
void to_json(Json& j, const SampleSpec& s);
void from_json(const Json& j, SampleSpec& s);
void to_json(Json& j, const EventSet& s);
void from_json(const Json& j, EventSet& s);
void to_json(Json& j, const IdeologyScores& s);
void from_json(const Json& j, IdeologyScores& s);
void to_json(Json& j, const DipResult& d);
void from_json(const Json& j, DipResult& d);
void to_json(Json& j, const MetricsReport& r);
void from_json(const Json& j, MetricsReport& r);
void to_json(Json& j, const SweepPoint& p);
void from_json(const Json& j, SweepPoint& p);
void to_json(Json& j, const SweepConfig& c);
void from_json(const Json& j, SweepConfig& c);
void to_json(Json& j, const SweepResult& r);
void from_json(const Json& j, SweepResult& r);
void to_json(Json& j, const Popularity& p);
void from_json(const Json& j, Popularity& p);
void to_json(Json& j, const SyntheticConfig& c);
void from_json(const Json& j, SyntheticConfig& c);

Json rng_to_json(const RngStream& rng);
RngStream rng_from_json(const Json& j);

/// Long format: fraction,replicate,n_retweets,dip_D,dip_p,verdict,
/// wasserstein,lwcc,fragmented. Failed points leave the metric cells empty
/// and carry "failed:<code>" as verdict.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// One row per fraction with mean, min and max over replicates.
void write_sweep_summary_csv(std::ostream& out, const SweepResult& result);

}  // namespace polarsample
