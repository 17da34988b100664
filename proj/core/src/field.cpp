#include "harnack/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace harnack::field {

FieldFn constant(Eigen::Index n, double c) {
  return FieldFn(Eigen::VectorXd::Constant(n, c));
}

FieldFn clamp(const FieldFn& u, double lo, double hi) {
  FieldFn out(u.values.cwiseMax(lo).cwiseMin(hi), u.domain);
  return out;
}

FieldFn pow(const FieldFn& u, double p) {
  FieldFn out(u.size(), u.domain);
  for (Eigen::Index i = 0; i < u.size(); ++i)
    out.values[i] = std::pow(u.values[i], p);
  return out;
}

FieldFn shift(const FieldFn& u, double delta) {
  return FieldFn(u.values.array() + delta, u.domain);
}

FieldFn restrict_to(const FieldFn& u, const std::vector<int>& members) {
  FieldFn out(u.size(), FieldFn::Domain::BallRestricted);
  for (int v : members) out.values[v] = u.values[v];
  return out;
}

double min_over(const FieldFn& u, const std::vector<int>& members) {
  double m = std::numeric_limits<double>::infinity();
  for (int v : members) m = std::min(m, u.values[v]);
  return m;
}

double max_over(const FieldFn& u, const std::vector<int>& members) {
  double m = -std::numeric_limits<double>::infinity();
  for (int v : members) m = std::max(m, u.values[v]);
  return m;
}

}  // namespace harnack::field
