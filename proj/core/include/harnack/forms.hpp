#ifndef HARNACK_FORMS_HPP
#define HARNACK_FORMS_HPP

#include "harnack/field.hpp"
#include "harnack/space.hpp"

#include <memory>
#include <vector>

namespace harnack {

/// Strongly local Dirichlet form on a Space, given by nonnegative edge
/// conductances. The energy a(u,v) = sum_e c_e (u_a - u_b)(v_a - v_b) and
/// the energy density splits each edge term half-and-half between its
/// endpoints, so the densities sum exactly to the total energy.
class EnergyForm {
 public:
  EnergyForm(std::shared_ptr<const Space> space,
             std::vector<double> conductance);

  const Space& space() const { return *space_; }
  std::shared_ptr<const Space> space_ptr() const { return space_; }
  const std::vector<double>& conductance() const { return conductance_; }
  double max_conductance() const;

  double energy(const FieldFn& u, const FieldFn& v) const;
  double energy(const FieldFn& u) const { return energy(u, u); }

  /// Per-vertex signed densities mu(u,v)(x).
  FieldFn energy_measure(const FieldFn& u, const FieldFn& v) const;

  /// Residual pairing a(u, e_x) for a single vertex indicator e_x; equals
  /// the conductance-weighted Laplacian of u at x.
  double pair_with_indicator(const FieldFn& u, int x) const;

 private:
  std::shared_ptr<const Space> space_;
  std::vector<double> conductance_;
};

/// Radial cut-off: 1 on B(x, s r), 0 outside B(x, t r), linear in the
/// metric in between. c_cut is the measured sup of
/// mu(eta,eta)(y) (t-s)^2 r^2 / m(y).
struct CutoffFn {
  FieldFn values;
  int center = -1;
  double inner_radius = 0.0;  // s * r
  double outer_radius = 0.0;  // t * r
  double c_cut = 0.0;
};

CutoffFn make_cutoff(const EnergyForm& form, int center, double r, double s,
                     double t);

/// Lower/upper weight pair with its measured Muckenhoupt-type A2
/// characteristic over sampled balls and a doubling check of the upper
/// weight.
struct WeightPair {
  FieldFn w;  // lower
  FieldFn v;  // upper
  double a2_constant = 1.0;
  double dinfty_constant = 1.0;
  bool dinfty_flag = true;
};

WeightPair uniform_weights(const Space& space);

/// max over the given balls of (avg_B w)(avg_B w^{-1}); also fills the
/// doubling constant of v over (r, 2r) ball pairs at the same centers.
void measure_weight_characteristics(const Space& space, WeightPair& weights,
                                    const std::vector<int>& centers,
                                    double radius);

/// Symmetric per-vertex 2x2 coefficient field for div(A grad .) grids.
struct MatrixField {
  std::vector<double> a11;
  std::vector<double> a12;
  std::vector<double> a22;

  static MatrixField identity(int n);
  static MatrixField diagonal(int n, double d1, double d2);
};

/// Five-point conductances for a grid: axis edges take the average of the
/// endpoint cells' diagonal coefficient. The two-sided ellipticity bound
/// w(x) |xi|^2 <= <A xi, xi> <= v(x) |xi|^2 is checked at every cell.
EnergyForm build_weighted_elliptic(std::shared_ptr<const Space> space,
                                   const WeightPair& weights,
                                   const MatrixField& A);

/// Grushin-type degenerate form on a grid over [-1,1]^2: horizontal edges
/// carry the lower weight, vertical edges at abscissa x1 carry
/// w * max(|x1|^(2 exponent), epsilon_degeneracy).
EnergyForm build_grushin(std::shared_ptr<const Space> space, double exponent,
                         const WeightPair& weights);

/// Degeneracy floor for vertical Grushin conductances at x1 = 0; keeps the
/// form irreducible.
inline constexpr double kEpsilonDegeneracy = 1e-8;

/// Space with the same graph but edge lengths 1/sqrt(c_e): the
/// conductance-weighted (intrinsic) metric of the form.
Space intrinsic_space(const EnergyForm& form);

}  // namespace harnack

#endif
