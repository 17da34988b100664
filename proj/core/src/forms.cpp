#include "harnack/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace harnack {

EnergyForm::EnergyForm(std::shared_ptr<const Space> space,
                       std::vector<double> conductance)
    : space_(std::move(space)), conductance_(std::move(conductance)) {
  if (!space_) throw std::invalid_argument("null space");
  if (conductance_.size() != space_->edges().size())
    throw std::invalid_argument("conductance size mismatch");
  for (double c : conductance_)
    if (!(c >= 0.0)) throw std::invalid_argument("negative conductance");
}

double EnergyForm::max_conductance() const {
  double m = 0.0;
  for (double c : conductance_) m = std::max(m, c);
  return m;
}

double EnergyForm::energy(const FieldFn& u, const FieldFn& v) const {
  if (u.size() != space_->vertex_count() || v.size() != space_->vertex_count())
    throw std::invalid_argument("field dimension mismatch");
  double acc = 0.0;
  const auto& edges = space_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double du = u.values[edges[e].a] - u.values[edges[e].b];
    double dv = v.values[edges[e].a] - v.values[edges[e].b];
    acc += conductance_[e] * du * dv;
  }
  return acc;
}

FieldFn EnergyForm::energy_measure(const FieldFn& u, const FieldFn& v) const {
  if (u.size() != space_->vertex_count() || v.size() != space_->vertex_count())
    throw std::invalid_argument("field dimension mismatch");
  FieldFn density(space_->vertex_count());
  const auto& edges = space_->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double du = u.values[edges[e].a] - u.values[edges[e].b];
    double dv = v.values[edges[e].a] - v.values[edges[e].b];
    double half = 0.5 * conductance_[e] * du * dv;
    density.values[edges[e].a] += half;
    density.values[edges[e].b] += half;
  }
  return density;
}

double EnergyForm::pair_with_indicator(const FieldFn& u, int x) const {
  double acc = 0.0;
  for (const Space::Half& h : space_->adjacency(x))
    acc += conductance_[h.edge] * (u.values[x] - u.values[h.to]);
  return acc;
}

CutoffFn make_cutoff(const EnergyForm& form, int center, double r, double s,
                     double t) {
  if (!(s >= 0.5 && s < t && t <= 1.0))
    throw std::invalid_argument("cutoff needs 1/2 <= s < t <= 1");
  if (!(r > 0.0)) throw std::invalid_argument("cutoff radius must be > 0");
  const Space& space = form.space();
  auto dist = space.distances_from(center);
  CutoffFn eta;
  eta.center = center;
  eta.inner_radius = s * r;
  eta.outer_radius = t * r;
  eta.values = FieldFn(space.vertex_count());
  const double width = (t - s) * r;
  for (int v = 0; v < space.vertex_count(); ++v) {
    double val = (t * r - (*dist)[v]) / width;
    eta.values.values[v] = std::clamp(val, 0.0, 1.0);
  }
  FieldFn density = form.energy_measure(eta.values, eta.values);
  double c_cut = 0.0;
  for (int v = 0; v < space.vertex_count(); ++v)
    c_cut = std::max(c_cut,
                     density.values[v] * width * width / space.measure(v));
  eta.c_cut = c_cut;
  return eta;
}

WeightPair uniform_weights(const Space& space) {
  WeightPair wp;
  wp.w = field::constant(space.vertex_count(), 1.0);
  wp.v = field::constant(space.vertex_count(), 1.0);
  return wp;
}

void measure_weight_characteristics(const Space& space, WeightPair& weights,
                                    const std::vector<int>& centers,
                                    double radius) {
  double a2 = 1.0;
  double dinf = 1.0;
  for (int x : centers) {
    Ball b = space.ball(x, radius);
    Ball b2 = space.ball(x, 2.0 * radius);
    double avg_w = 0.0, avg_winv = 0.0, vol = 0.0;
    double v_small = 0.0, v_big = 0.0;
    for (int y : b.members) {
      avg_w += weights.w.values[y] * space.measure(y);
      avg_winv += space.measure(y) / weights.w.values[y];
      vol += space.measure(y);
      v_small += weights.v.values[y] * space.measure(y);
    }
    for (int y : b2.members) v_big += weights.v.values[y] * space.measure(y);
    avg_w /= vol;
    avg_winv /= vol;
    a2 = std::max(a2, avg_w * avg_winv);
    if (v_small > 0.0) dinf = std::max(dinf, v_big / v_small);
  }
  weights.a2_constant = a2;
  weights.dinfty_constant = dinf;
  weights.dinfty_flag = std::isfinite(dinf);
}

MatrixField MatrixField::identity(int n) {
  MatrixField f;
  f.a11.assign(n, 1.0);
  f.a12.assign(n, 0.0);
  f.a22.assign(n, 1.0);
  return f;
}

MatrixField MatrixField::diagonal(int n, double d1, double d2) {
  MatrixField f;
  f.a11.assign(n, d1);
  f.a12.assign(n, 0.0);
  f.a22.assign(n, d2);
  return f;
}

EnergyForm build_weighted_elliptic(std::shared_ptr<const Space> space,
                                   const WeightPair& weights,
                                   const MatrixField& A) {
  const int n = space->vertex_count();
  if (!space->has_positions())
    throw std::invalid_argument("weighted elliptic form needs a grid space");
  if (static_cast<int>(A.a11.size()) != n ||
      static_cast<int>(A.a12.size()) != n ||
      static_cast<int>(A.a22.size()) != n)
    throw std::invalid_argument("coefficient field size mismatch");

  // Two-sided bound per cell via the symmetric 2x2 eigenvalues.
  for (int x = 0; x < n; ++x) {
    double tr = A.a11[x] + A.a22[x];
    double det_part = std::sqrt((A.a11[x] - A.a22[x]) * (A.a11[x] - A.a22[x]) +
                                4.0 * A.a12[x] * A.a12[x]);
    double lmin = 0.5 * (tr - det_part);
    double lmax = 0.5 * (tr + det_part);
    if (lmin < weights.w.values[x] || lmax > weights.v.values[x])
      throw std::invalid_argument("ellipticity bound violated at cell " +
                                  std::to_string(x));
  }

  std::vector<double> cond(space->edges().size(), 0.0);
  const auto& edges = space->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int a = edges[e].a, b = edges[e].b;
    bool horizontal = std::abs(space->position(a)[1] - space->position(b)[1]) <
                      std::abs(space->position(a)[0] - space->position(b)[0]);
    const auto& diag = horizontal ? A.a11 : A.a22;
    cond[e] = 0.5 * (diag[a] + diag[b]);
  }
  return EnergyForm(std::move(space), std::move(cond));
}

EnergyForm build_grushin(std::shared_ptr<const Space> space, double exponent,
                         const WeightPair& weights) {
  if (!(exponent >= 0.0))
    throw std::invalid_argument("grushin exponent must be >= 0");
  if (!space->has_positions())
    throw std::invalid_argument("grushin form needs a grid space");
  std::vector<double> cond(space->edges().size(), 0.0);
  const auto& edges = space->edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int a = edges[e].a, b = edges[e].b;
    double w_edge = 0.5 * (weights.w.values[a] + weights.w.values[b]);
    bool horizontal = std::abs(space->position(a)[1] - space->position(b)[1]) <
                      std::abs(space->position(a)[0] - space->position(b)[0]);
    if (horizontal) {
      cond[e] = w_edge;
    } else {
      double x1 = 0.5 * (space->position(a)[0] + space->position(b)[0]);
      double degenerate = std::pow(std::abs(x1), 2.0 * exponent);
      cond[e] = w_edge * std::max(degenerate, kEpsilonDegeneracy);
    }
  }
  return EnergyForm(std::move(space), std::move(cond));
}

Space intrinsic_space(const EnergyForm& form) {
  const Space& base = form.space();
  std::vector<Space::Edge> edges = base.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double c = std::max(form.conductance()[e], kEpsilonDegeneracy);
    edges[e].length = 1.0 / std::sqrt(c);
  }
  std::vector<double> measure(base.vertex_count());
  for (int v = 0; v < base.vertex_count(); ++v) measure[v] = base.measure(v);
  std::vector<std::array<double, 2>> pos;
  if (base.has_positions()) {
    pos.resize(base.vertex_count());
    for (int v = 0; v < base.vertex_count(); ++v) pos[v] = base.position(v);
  }
  return Space(base.vertex_count(), std::move(edges), std::move(measure),
               std::move(pos));
}

}  // namespace harnack
