#include "polarsample/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace polarsample {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::Multimodal ? "multimodal" : "unimodal_not_rejected";
}

Verdict verdict_from_string(std::string_view name) {
  if (name == "multimodal") return Verdict::Multimodal;
  if (name == "unimodal_not_rejected") return Verdict::UnimodalNotRejected;
  throw Error(ErrorCode::InvalidArgument, "unknown verdict '" + std::string(name) + "'");
}

namespace detail {

void sorted_uniforms(RngStream& rng, std::vector<double>& out, std::size_t n) {
  out.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += rng.exponential();
    out[i] = sum;
  }
  const double total = sum + rng.exponential();
  for (double& v : out) v /= total;
}

}  // namespace detail

double dip_pvalue(double statistic, std::size_t n, std::size_t n_bootstrap,
                  const RngStream& rng) {
  if (n < 4) throw Error(ErrorCode::TooFewSamples, "dip needs at least 4 samples");
  if (n_bootstrap == 0) throw Error(ErrorCode::InvalidArgument, "n_bootstrap must be positive");

  detail::DipWorkspace ws;
  std::vector<double> sample;
  std::size_t exceed = 0;
  for (std::size_t b = 0; b < n_bootstrap; ++b) {
    RngStream replicate = rng.derive(b);
    detail::sorted_uniforms(replicate, sample, n);
    if (detail::dip_sorted(sample, ws) >= statistic) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(n_bootstrap);
}

DipResult dip_test(std::span<const double> samples, std::size_t n_bootstrap,
                   const RngStream& rng) {
  DipResult result;
  result.statistic = dip_statistic(samples);
  result.n = samples.size();
  result.n_bootstrap = n_bootstrap;
  result.p_value = dip_pvalue(result.statistic, result.n, n_bootstrap, rng);
  result.verdict = result.p_value < kDipSignificance ? Verdict::Multimodal
                                                     : Verdict::UnimodalNotRejected;
  return result;
}

double wasserstein_1d(std::span<const double> p_samples, std::span<const double> q_samples) {
  if (p_samples.empty() || q_samples.empty()) {
    throw Error(ErrorCode::EmptySample, "Wasserstein distance of an empty sample");
  }
  std::vector<double> p(p_samples.begin(), p_samples.end());
  std::vector<double> q(q_samples.begin(), q_samples.end());
  std::sort(p.begin(), p.end());
  std::sort(q.begin(), q.end());

  // Both quantile functions are step functions; walk their merged
  // breakpoints i/n and j/m using integer cross-multiplication.
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t t_prev = 0;  // position along [0, n*m]
  double sum = 0.0;
  while (i < n && j < m) {
    const std::size_t next_p = (i + 1) * m;
    const std::size_t next_q = (j + 1) * n;
    const std::size_t t_next = std::min(next_p, next_q);
    sum += static_cast<double>(t_next - t_prev) * std::abs(p[i] - q[j]);
    t_prev = t_next;
    if (next_p == t_next) ++i;
    if (next_q == t_next) ++j;
  }
  return sum / static_cast<double>(n * m);
}

ComponentSummary weak_components(const EventSet& events) {
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](const std::string& id) {
    return index.try_emplace(id, index.size()).first->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(events.size());
  for (const auto& e : events.events()) {
    const std::size_t a = intern(e.retweeter_id);
    const std::size_t b = intern(e.influencer_id);
    edges.emplace_back(a, b);
  }

  ComponentSummary summary;
  summary.nodes = index.size();
  if (summary.nodes == 0) return summary;
  UnionFind uf(summary.nodes);
  for (auto [a, b] : edges) uf.unite(a, b);
  for (std::size_t v = 0; v < summary.nodes; ++v) {
    if (uf.find(v) == v) {
      ++summary.components;
      summary.largest = std::max(summary.largest, uf.size_of(v));
    }
  }
  return summary;
}

double lwcc_relative_size(const EventSet& events) {
  const ComponentSummary summary = weak_components(events);
  if (summary.nodes == 0) throw Error(ErrorCode::EmptyGraph, "no accounts in event set");
  return static_cast<double>(summary.largest) / static_cast<double>(summary.nodes);
}

double lwcc_relative_to(const EventSet& events, std::size_t reference_nodes) {
  const ComponentSummary summary = weak_components(events);
  if (summary.nodes == 0 || reference_nodes == 0) {
    throw Error(ErrorCode::EmptyGraph, "no accounts in event set");
  }
  return std::min(1.0, static_cast<double>(summary.largest) /
                           static_cast<double>(reference_nodes));
}

}  // namespace polarsample
