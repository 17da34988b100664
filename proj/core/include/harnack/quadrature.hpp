#ifndef HARNACK_QUADRATURE_HPP
#define HARNACK_QUADRATURE_HPP

#include <functional>

namespace harnack {

/// Adaptive Simpson on [a, b] to the requested relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rtol = 1e-10);

/// int_{lo}^{hi} g(rho) drho / rho, computed in the log variable.
double integrate_dlog(const std::function<double(double)>& g, double lo,
                      double hi, double rtol = 1e-10);

}  // namespace harnack

#endif
