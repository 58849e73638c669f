// Hartigan & Hartigan dip statistic.
//
// Port of the classic greatest-convex-minorant / least-concave-majorant
// algorithm (Applied Statistics AS 217), including the later fixes to the
// G-branch distance and the termination test. Indices are 1-based inside
// the routine to stay close to the reference formulation.

#include "polarsample/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace polarsample {
namespace detail {

double dip_sorted(std::span<const double> sorted, DipWorkspace& ws) {
  const int n = static_cast<int>(sorted.size());
  if (n < 1) return 0.0;
  // An all-equal sample is a point mass, which is unimodal.
  if (n < 2 || sorted.front() == sorted.back()) return 0.0;

  ws.mn.assign(static_cast<std::size_t>(n) + 1, 0);
  ws.mj.assign(static_cast<std::size_t>(n) + 1, 0);
  ws.gcm.assign(static_cast<std::size_t>(n) + 2, 0);
  ws.lcm.assign(static_cast<std::size_t>(n) + 2, 0);
  int* mn = ws.mn.data();
  int* mj = ws.mj.data();
  int* gcm = ws.gcm.data();
  int* lcm = ws.lcm.data();
  const double* x = sorted.data() - 1;

  // Work with 2n * dip; the minimal achievable value is one half-jump.
  double dip = 1.0;
  int low = 1;
  int high = n;

  // mn: back-pointers along the convex minorant.
  mn[1] = 1;
  for (int j = 2; j <= n; ++j) {
    mn[j] = j - 1;
    for (;;) {
      const int mnj = mn[j];
      const int mnmnj = mn[mnj];
      if (mnj == 1 ||
          (x[j] - x[mnj]) * (mnj - mnmnj) < (x[mnj] - x[mnmnj]) * (j - mnj)) {
        break;
      }
      mn[j] = mnmnj;
    }
  }

  // mj: forward pointers along the concave majorant.
  mj[n] = n;
  for (int k = n - 1; k >= 1; --k) {
    mj[k] = k + 1;
    for (;;) {
      const int mjk = mj[k];
      const int mjmjk = mj[mjk];
      if (mjk == n ||
          (x[k] - x[mjk]) * (mjk - mjmjk) < (x[mjk] - x[mjmjk]) * (k - mjk)) {
        break;
      }
      mj[k] = mjmjk;
    }
  }

  for (;;) {
    // GCM change points from high down to low.
    gcm[1] = high;
    int i = 1;
    while (gcm[i] > low) {
      gcm[i + 1] = mn[gcm[i]];
      ++i;
    }
    const int l_gcm = i;
    int ig = l_gcm;
    int ix = ig - 1;

    // LCM change points from low up to high.
    lcm[1] = low;
    i = 1;
    while (lcm[i] < high) {
      lcm[i + 1] = mj[lcm[i]];
      ++i;
    }
    const int l_lcm = i;
    int ih = l_lcm;
    int iv = 2;

    // Largest distance between GCM and LCM over [low, high].
    long double d = 0.0L;
    if (l_gcm != 2 || l_lcm != 2) {
      do {
        long double dx;
        const int gcmix = gcm[ix];
        const int lcmiv = lcm[iv];
        if (gcmix > lcmiv) {
          const int gcmi1 = gcm[ix + 1];
          dx = (lcmiv - gcmi1 + 1) - (static_cast<long double>(x[lcmiv]) - x[gcmi1]) *
                                         (gcmix - gcmi1) / (x[gcmix] - x[gcmi1]);
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          const int lcmiv1 = lcm[iv - 1];
          dx = (static_cast<long double>(x[gcmix]) - x[lcmiv1]) * (lcmiv - lcmiv1) /
                   (x[lcmiv] - x[lcmiv1]) -
               (gcmix - lcmiv1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > l_lcm) iv = l_lcm;
      } while (gcm[ix] != lcm[iv]);
    } else {
      d = 1.0L;
    }

    if (d < dip) break;

    // Dip of the convex minorant over its retained part.
    double dip_l = 0.0;
    for (int j = ig; j < l_gcm; ++j) {
      double max_t = 1.0;
      const int jb = gcm[j + 1];
      const int je = gcm[j];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double slope = (je - jb) / (x[je] - x[jb]);
        for (int jj = jb; jj <= je; ++jj) {
          const double t = (jj - jb + 1) - (x[jj] - x[jb]) * slope;
          max_t = std::max(max_t, t);
        }
      }
      dip_l = std::max(dip_l, max_t);
    }

    // Dip of the concave majorant.
    double dip_u = 0.0;
    for (int j = ih; j < l_lcm; ++j) {
      double max_t = 1.0;
      const int jb = lcm[j];
      const int je = lcm[j + 1];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double slope = (je - jb) / (x[je] - x[jb]);
        for (int jj = jb; jj <= je; ++jj) {
          const double t = (x[jj] - x[jb]) * slope - (jj - jb - 1);
          max_t = std::max(max_t, t);
        }
      }
      dip_u = std::max(dip_u, max_t);
    }

    dip = std::max({dip, dip_l, dip_u});

    // Without this check the modal interval can stop shrinking and cycle.
    if (low == gcm[ig] && high == lcm[ih]) break;
    low = gcm[ig];
    high = lcm[ih];
  }

  return dip / (2.0 * n);
}

}  // namespace detail

double dip_statistic(std::span<const double> samples) {
  if (samples.size() < 4) {
    throw Error(ErrorCode::TooFewSamples, "dip needs at least 4 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  if (!std::all_of(sorted.begin(), sorted.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::InvalidArgument, "non-finite sample");
  }
  std::sort(sorted.begin(), sorted.end());
  detail::DipWorkspace ws;
  return detail::dip_sorted(sorted, ws);
}

}  // namespace polarsample
