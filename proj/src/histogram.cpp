#include "polarsample/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "polarsample/core_types.hpp"

namespace polarsample {

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lo,
                         double hi) {
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + width * static_cast<double>(k);
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    const double pos = std::floor((v - lo) / width);
    const auto bin = static_cast<std::size_t>(
        std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[bin];
  }
  return h;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins) {
  if (values.empty()) return make_histogram(values, bins, 0.0, 1.0);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return make_histogram(values, bins, *lo, *hi);
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << "bin_left,bin_right,count\n";
  for (std::size_t k = 0; k < histogram.counts.size(); ++k) {
    out << fmt::format("{},{},{}\n", histogram.edges[k], histogram.edges[k + 1],
                       histogram.counts[k]);
  }
}

}  // namespace polarsample
