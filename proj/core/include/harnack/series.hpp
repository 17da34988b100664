#ifndef HARNACK_SERIES_HPP
#define HARNACK_SERIES_HPP

namespace harnack {

struct SeriesResult {
  double value = 0.0;
  int terms = 0;
  bool certified = false;  // geometric tail bound < 1e-12 relative
};

/// sum_{j>=0} (3/4)^j (2 (j+1)(j+2))^(two_d), summed until the ratio-test
/// tail is below 1e-12 of the partial sum.
SeriesResult contraction_series(double two_d);

/// gamma = gamma1 * series, gamma1 = 8 c (worst case of the sup-profile
/// contraction), d the reverse-Hoelder dimension sigma/(sigma-1).
double moser_gamma(double c_abs, double d);

}  // namespace harnack

#endif
