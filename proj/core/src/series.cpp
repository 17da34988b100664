#include "harnack/series.hpp"

#include <cmath>
#include <stdexcept>

namespace harnack {

SeriesResult contraction_series(double two_d) {
  if (!(two_d > 0.0)) throw std::invalid_argument("exponent must be positive");
  SeriesResult res;
  double sum = 0.0;
  double pow34 = 1.0;
  int j = 0;
  for (; j < 1000000; ++j) {
    double term = pow34 * std::pow(2.0 * (j + 1.0) * (j + 2.0), two_d);
    sum += term;
    // Ratios (3/4)((j+3)/(j+1))^(2d) decrease towards 3/4; once below 1
    // the geometric tail bound term * rho/(1-rho) is valid.
    double rho = 0.75 * std::pow((j + 3.0) / (j + 1.0), two_d);
    if (rho < 1.0) {
      double tail = term * rho / (1.0 - rho);
      if (tail < 1e-12 * sum) {
        res.certified = true;
        ++j;
        break;
      }
    }
    pow34 *= 0.75;
  }
  res.value = sum;
  res.terms = j;
  return res;
}

double moser_gamma(double c_abs, double d) {
  return 8.0 * c_abs * contraction_series(2.0 * d).value;
}

}  // namespace harnack
