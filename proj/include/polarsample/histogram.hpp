#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace polarsample {

inline constexpr std::size_t kDefaultHistogramBins = 50;

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [lo, hi]; values outside are clamped into the
/// end bins and the last bin is closed on the right.
Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo,
                         double hi);

/// Range taken from the data.
Histogram make_histogram(std::span<const double> values,
                         std::size_t bins = kDefaultHistogramBins);

/// Header "bin_left,bin_right,count".
void write_histogram_csv(std::ostream& out, const Histogram& histogram);

}  // namespace polarsample
