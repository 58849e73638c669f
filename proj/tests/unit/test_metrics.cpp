#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles/oracles.hpp"
#include "polarsample/metrics.hpp"
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

// Integral of |F(x) - G(x)| over the merged support, an independent route
// to the same distance as the quantile formula.
double cdf_area(std::vector<double> p, std::vector<double> q) {
  std::sort(p.begin(), p.end());
  std::sort(q.begin(), q.end());
  std::vector<double> grid = p;
  grid.insert(grid.end(), q.begin(), q.end());
  std::sort(grid.begin(), grid.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double x = grid[k];
    const double f = static_cast<double>(std::upper_bound(p.begin(), p.end(), x) - p.begin()) /
                     static_cast<double>(p.size());
    const double g = static_cast<double>(std::upper_bound(q.begin(), q.end(), x) - q.begin()) /
                     static_cast<double>(q.size());
    area += std::abs(f - g) * (grid[k + 1] - x);
  }
  return area;
}

std::vector<double> draws(RngStream& rng, std::size_t n, double shift, double scale) {
  std::vector<double> v(n);
  for (auto& x : v) x = shift + scale * rng.normal();
  return v;
}

}  // namespace

TEST_CASE("wasserstein: matches the transport LP oracle") {
  const auto fixture = testing::load_fixture("transport_oracle_cases.json");
  std::size_t cases = 0;
  for (const auto& c : fixture.at("cases")) {
    const auto p = c.at("p").get<std::vector<double>>();
    const auto q = c.at("q").get<std::vector<double>>();
    const double want = c.at("distance").get<double>();
    CHECK(std::abs(wasserstein_1d(p, q) - want) <= 1e-9);
    ++cases;
  }
  CHECK(cases >= 100);
}

TEST_CASE("wasserstein: agrees with the CDF-area formula") {
  RngStream rng(31, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = draws(rng, 1 + rng.uniform_index(40), 0.0, 1.0);
    const auto q = draws(rng, 1 + rng.uniform_index(40), rng.normal(), 2.0);
    CHECK(wasserstein_1d(p, q) == doctest::Approx(cdf_area(p, q)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("wasserstein: metric properties") {
  RngStream rng(32, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = draws(rng, 5 + rng.uniform_index(30), 0.0, 1.0);
    const auto q = draws(rng, 5 + rng.uniform_index(30), 0.5, 1.5);
    const auto r = draws(rng, 5 + rng.uniform_index(30), -1.0, 0.7);
    CHECK(wasserstein_1d(p, p) == 0.0);
    CHECK(wasserstein_1d(p, q) == doctest::Approx(wasserstein_1d(q, p)).epsilon(1e-12));
    CHECK(wasserstein_1d(p, r) <= wasserstein_1d(p, q) + wasserstein_1d(q, r) + 1e-12);
    CHECK(wasserstein_1d(p, q) >= 0.0);

    const double c = rng.normal() * 3.0;
    std::vector<double> shifted = p;
    for (auto& x : shifted) x += c;
    CHECK(wasserstein_1d(p, shifted) == doctest::Approx(std::abs(c)).epsilon(1e-10));

    std::vector<double> shuffled = p;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(wasserstein_1d(shuffled, q) == doctest::Approx(wasserstein_1d(p, q)).epsilon(1e-12));
  }
}

TEST_CASE("wasserstein: point masses and errors") {
  const std::vector<double> zero{0.0}, one{1.0};
  CHECK(wasserstein_1d(zero, one) == 1.0);
  CHECK(wasserstein_1d(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0, 1.0}) == 1.0);
  CHECK(wasserstein_1d(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5}) == 0.5);
  CHECK(code_of([&] { wasserstein_1d({}, one); }) == ErrorCode::EmptySample);
  CHECK(code_of([&] { wasserstein_1d(one, {}); }) == ErrorCode::EmptySample);
}

TEST_CASE("lwcc: documented examples") {
  CHECK(lwcc_relative_size(EventSet({event("1", "u", "p")})) == 1.0);
  // Components {u1, u2, p1} and {u3, p2}.
  const EventSet two({event("1", "u1", "p1"), event("2", "u2", "p1"), event("3", "u3", "p2")});
  CHECK(lwcc_relative_size(two) == doctest::Approx(0.6));
  const ComponentSummary s = weak_components(two);
  CHECK(s.nodes == 5);
  CHECK(s.largest == 3);
  CHECK(s.components == 2);
  CHECK(lwcc_relative_to(two, 10) == doctest::Approx(0.3));
  CHECK(lwcc_relative_to(two, 2) == 1.0);
  CHECK(code_of([] { lwcc_relative_size(EventSet()); }) == ErrorCode::EmptyGraph);
  CHECK(code_of([&] { lwcc_relative_to(two, 0); }) == ErrorCode::EmptyGraph);
}

TEST_CASE("lwcc: random graphs against breadth-first search") {
  RngStream rng(33, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nodes = 200;
    const std::size_t edges = 40 + rng.uniform_index(300);
    std::vector<RetweetEvent> events;
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t k = 0; k < edges; ++k) {
      const auto a = rng.uniform_index(nodes);
      auto b = rng.uniform_index(nodes);
      if (b == a) b = (a + 1) % nodes;
      const std::string u = "n" + std::to_string(a), p = "n" + std::to_string(b);
      events.push_back(event("t" + std::to_string(k), u, p, static_cast<std::int64_t>(k)));
      pairs.emplace_back(u, p);
    }
    const auto [largest, seen] = oracle::bfs_largest_component(pairs);
    const EventSet set(events);
    const ComponentSummary s = weak_components(set);
    CHECK(s.largest == largest);
    CHECK(s.nodes == seen);
    CHECK(lwcc_relative_size(set) ==
          doctest::Approx(static_cast<double>(largest) / static_cast<double>(seen)));

    // Repeating every retweet changes neither nodes nor components.
    std::vector<RetweetEvent> doubled = events;
    for (auto e : events) {
      e.tweet_id += "x";
      doubled.push_back(e);
    }
    const ComponentSummary d = weak_components(EventSet(doubled));
    CHECK(d.largest == s.largest);
    CHECK(d.components == s.components);
  }
}
