#include "harnack/solve.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace harnack {

std::string to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Harmonic: return "harmonic";
    case SolutionClass::Subsolution: return "subsolution";
    case SolutionClass::Supersolution: return "supersolution";
    default: return "none";
  }
}

std::vector<int> boundary_layer(const Space& space, const Ball& ball) {
  std::vector<char> inside(space.vertex_count(), 0);
  for (int v : ball.members) inside[v] = 1;
  std::vector<char> collar(space.vertex_count(), 0);
  for (int v : ball.members)
    for (const Space::Half& h : space.adjacency(v))
      if (!inside[h.to]) collar[h.to] = 1;
  std::vector<int> out;
  for (int v = 0; v < space.vertex_count(); ++v)
    if (collar[v]) out.push_back(v);
  return out;
}

SolutionReport solve_harmonic(const EnergyForm& form, const Ball& ball,
                              const FieldFn& boundary) {
  const Space& space = form.space();
  const int n = space.vertex_count();
  if (boundary.size() != n)
    throw std::invalid_argument("boundary field dimension mismatch");

  std::vector<int> collar = boundary_layer(space, ball);
  if (collar.empty())
    throw std::invalid_argument("ball has no Dirichlet collar");

  std::vector<int> index(n, -1);
  const int m = static_cast<int>(ball.members.size());
  for (int i = 0; i < m; ++i) index[ball.members[i]] = i;

  // Interior stiffness and boundary coupling, conductance-weighted.
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  std::vector<double> diag(m, 0.0);
  const auto& edges = space.edges();
  const auto& cond = form.conductance();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    int a = edges[e].a, b = edges[e].b;
    double c = cond[e];
    if (c == 0.0) continue;
    int ia = index[a], ib = index[b];
    if (ia >= 0 && ib >= 0) {
      diag[ia] += c;
      diag[ib] += c;
      trips.emplace_back(ia, ib, -c);
      trips.emplace_back(ib, ia, -c);
    } else if (ia >= 0) {
      diag[ia] += c;
      rhs[ia] += c * boundary.values[b];
    } else if (ib >= 0) {
      diag[ib] += c;
      rhs[ib] += c * boundary.values[a];
    }
  }
  for (int i = 0; i < m; ++i) trips.emplace_back(i, i, diag[i]);

  Eigen::SparseMatrix<double> L(m, m);
  L.setFromTriplets(trips.begin(), trips.end());

  Eigen::VectorXd sol;
  if (m < 400) {
    Eigen::MatrixXd dense(L);
    Eigen::LLT<Eigen::MatrixXd> llt(dense);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("singular system: disconnected interior");
    sol = llt.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(1e-12);
    cg.setMaxIterations(40L * m);
    cg.compute(L);
    sol = cg.solve(rhs);
    if (cg.info() != Eigen::Success) {
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(L);
      if (lu.info() != Eigen::Success)
        throw std::runtime_error("singular system: disconnected interior");
      sol = lu.solve(rhs);
    }
  }

  SolutionReport rep;
  rep.u = FieldFn(n, FieldFn::Domain::BallRestricted);
  for (int v : collar) rep.u.values[v] = boundary.values[v];
  for (int i = 0; i < m; ++i) rep.u.values[ball.members[i]] = sol[i];
  rep.solution_class = SolutionClass::Harmonic;

  double res = 0.0;
  for (int v : ball.members)
    res = std::max(res, std::abs(form.pair_with_indicator(rep.u, v)));
  rep.residual = res;

  double dmin = boundary.values[collar[0]];
  for (int v : collar) dmin = std::min(dmin, boundary.values[v]);
  rep.delta_floor = dmin;
  return rep;
}

SolutionReport classify(const EnergyForm& form, const Ball& ball,
                        const FieldFn& u, double rtol) {
  const Space& space = form.space();
  std::vector<int> collar = boundary_layer(space, ball);

  double lo = field::min_over(u, ball.members);
  double hi = field::max_over(u, ball.members);
  for (int v : collar) {
    lo = std::min(lo, u.values[v]);
    hi = std::max(hi, u.values[v]);
  }
  const double scale = form.max_conductance() * std::max(hi - lo, 1e-300);
  const double tol = rtol * scale;

  double worst_pos = 0.0, worst_neg = 0.0;
  for (int v : ball.members) {
    double r = form.pair_with_indicator(u, v);
    worst_pos = std::max(worst_pos, r);
    worst_neg = std::min(worst_neg, r);
  }

  SolutionReport rep;
  rep.u = u;
  rep.delta_floor = field::min_over(u, ball.members);
  if (worst_pos <= tol && -worst_neg <= tol) {
    rep.solution_class = SolutionClass::Harmonic;
    rep.residual = std::max(worst_pos, -worst_neg);
  } else if (worst_pos <= tol) {
    rep.solution_class = SolutionClass::Subsolution;
    rep.residual = worst_pos;
  } else if (-worst_neg <= tol) {
    rep.solution_class = SolutionClass::Supersolution;
    rep.residual = -worst_neg;
  } else {
    rep.solution_class = SolutionClass::None;
    rep.residual = std::max(worst_pos, -worst_neg);
  }
  return rep;
}

FieldFn lift_by_delta(const FieldFn& u, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  return field::shift(u, delta);
}

SamplerKind sampler_from_string(const std::string& s) {
  if (s == "uniform") return SamplerKind::Uniform;
  if (s == "bump") return SamplerKind::Bump;
  if (s == "two_level") return SamplerKind::TwoLevel;
  throw std::invalid_argument("unknown sampler kind: " + s);
}

BoundarySampler::BoundarySampler(SamplerKind kind, std::uint64_t seed,
                                 double delta)
    : kind_(kind), state_(seed ? seed : 0x9E3779B97F4A7C15ull), delta_(delta) {}

double BoundarySampler::next_unit() {
  // splitmix64; platform-independent uniforms in [0, 1).
  state_ += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

FieldFn BoundarySampler::sample(const Space& space, const Ball& ball,
                                const std::vector<int>& collar) {
  FieldFn g(space.vertex_count(), FieldFn::Domain::BallRestricted);
  switch (kind_) {
    case SamplerKind::Uniform:
      for (int v : collar)
        g.values[v] = delta_ + (1.0 - delta_) * next_unit();
      break;
    case SamplerKind::TwoLevel:
      for (int v : collar)
        g.values[v] = next_unit() < 0.5 ? delta_ : 1.0;
      break;
    case SamplerKind::Bump: {
      // Smooth positive bump centered at a random collar vertex.
      if (collar.empty()) break;
      int pick = static_cast<int>(next_unit() * collar.size());
      pick = std::min<int>(pick, static_cast<int>(collar.size()) - 1);
      auto dist = space.distances_from(collar[pick]);
      double spread = std::max(ball.radius, 1.0);
      for (int v : collar) {
        double d = (*dist)[v] / spread;
        g.values[v] = delta_ + (1.0 - delta_) * std::exp(-d * d);
      }
      break;
    }
  }
  return g;
}

}  // namespace harnack
