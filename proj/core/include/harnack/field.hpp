#ifndef HARNACK_FIELD_HPP
#define HARNACK_FIELD_HPP

#include <Eigen/Dense>

#include <vector>

namespace harnack {

/// Vertex-indexed real function. Values are stored for every vertex of the
/// ambient space; ball-restricted fields keep zeros (or boundary data)
/// outside their domain and carry the tag so consumers can check intent.
struct FieldFn {
  enum class Domain { Global, BallRestricted };

  Eigen::VectorXd values;
  Domain domain = Domain::Global;

  FieldFn() = default;
  explicit FieldFn(Eigen::VectorXd v, Domain d = Domain::Global)
      : values(std::move(v)), domain(d) {}
  explicit FieldFn(Eigen::Index n, Domain d = Domain::Global)
      : values(Eigen::VectorXd::Zero(n)), domain(d) {}

  Eigen::Index size() const { return values.size(); }
  double operator[](Eigen::Index i) const { return values[i]; }
  double& operator[](Eigen::Index i) { return values[i]; }
};

namespace field {

FieldFn constant(Eigen::Index n, double c);

/// Pointwise clamp to [lo, hi].
FieldFn clamp(const FieldFn& u, double lo, double hi);

/// Pointwise power |u|^p with the sign convention of positive inputs;
/// caller guarantees u > 0 when p is not a positive integer.
FieldFn pow(const FieldFn& u, double p);

FieldFn shift(const FieldFn& u, double delta);

/// Zero out all vertices not in `members` (sorted index list).
FieldFn restrict_to(const FieldFn& u, const std::vector<int>& members);

double min_over(const FieldFn& u, const std::vector<int>& members);
double max_over(const FieldFn& u, const std::vector<int>& members);

}  // namespace field

}  // namespace harnack

#endif
