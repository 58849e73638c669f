#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "polarsample/core_types.hpp"

namespace polarsample {

/// p below this marks a distribution as significantly multimodal.
inline constexpr double kDipSignificance = 0.01;
inline constexpr std::size_t kDefaultBootstrap = 10'000;

enum class Verdict { Multimodal, UnimodalNotRejected };

std::string_view to_string(Verdict verdict);
Verdict verdict_from_string(std::string_view name);

struct DipResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  std::size_t n_bootstrap = 0;
  Verdict verdict = Verdict::UnimodalNotRejected;

  friend bool operator==(const DipResult&, const DipResult&) = default;
};

struct MetricsReport {
  DipResult dip;
  double wasserstein_to_reference = 0.0;
  double lwcc_relative = 1.0;
  std::size_t n_retweets = 0;
  std::size_t n_users = 0;
  std::size_t n_influencers = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Hartigan's dip: sup-distance between the empirical CDF and the closest
/// unimodal CDF. Lies in [0, 0.25]. Throws TooFewSamples for n < 4.
double dip_statistic(std::span<const double> samples);

/// Share of `n_bootstrap` uniform(0, 1) samples of size n whose dip is at
/// least `statistic`. Replicate b draws from rng.derive(b), so the result
/// does not depend on evaluation order.
double dip_pvalue(double statistic, std::size_t n, std::size_t n_bootstrap,
                  const RngStream& rng);

/// Statistic, calibrated p-value and verdict in one call.
DipResult dip_test(std::span<const double> samples, std::size_t n_bootstrap,
                   const RngStream& rng);

/// Order-1 Wasserstein distance between two empirical distributions,
/// computed exactly as the integral of |F^-1(t) - G^-1(t)| over t.
double wasserstein_1d(std::span<const double> p_samples, std::span<const double> q_samples);

struct ComponentSummary {
  std::size_t nodes = 0;
  std::size_t largest = 0;
  std::size_t components = 0;
};

/// Weak components of the retweet graph: accounts as nodes, one undirected
/// edge per distinct (retweeter, influencer) pair.
ComponentSummary weak_components(const EventSet& events);

/// |largest weak component| / |nodes|. Throws EmptyGraph.
double lwcc_relative_size(const EventSet& events);

/// |largest weak component| / reference_nodes, for comparing samples
/// against the node count of the full graph.
double lwcc_relative_to(const EventSet& events, std::size_t reference_nodes);

namespace detail {

struct DipWorkspace {
  std::vector<int> mn;
  std::vector<int> mj;
  std::vector<int> gcm;
  std::vector<int> lcm;
};

/// Dip of already sorted, finite data.
double dip_sorted(std::span<const double> sorted, DipWorkspace& ws);

/// Sorted uniform(0, 1) order statistics via normalized exponential spacings.
void sorted_uniforms(RngStream& rng, std::vector<double>& out, std::size_t n);

}  // namespace detail

}  // namespace polarsample
