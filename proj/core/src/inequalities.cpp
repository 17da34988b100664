#include "harnack/inequalities.hpp"

#include "harnack/series.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace harnack {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double splitmix(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z = z ^ (z >> 31);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Mass/energy pencil on a (possibly dilated) ball. Indices are local to
/// the dilated member list; fields vanish outside it.
struct BallPencil {
  std::vector<int> support;        // dilated ball members (sorted)
  std::vector<int> local_of;       // global -> local or -1
  Eigen::SparseMatrix<double> K;   // energy restricted to the support
  std::vector<int> mass_local;     // locals belonging to the inner ball
  Eigen::VectorXd mass;            // m(x) for mass_local entries
  double mass_total = 0.0;
  bool has_crossing = false;

  Eigen::VectorXd apply_mass(const Eigen::VectorXd& u) const {
    double mean = 0.0;
    for (std::size_t i = 0; i < mass_local.size(); ++i)
      mean += mass[i] * u[mass_local[i]];
    mean /= mass_total;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
    for (std::size_t i = 0; i < mass_local.size(); ++i)
      out[mass_local[i]] = mass[i] * (u[mass_local[i]] - mean);
    return out;
  }
};

BallPencil build_pencil(const EnergyForm& form, const Ball& inner,
                        const Ball& dilated) {
  const Space& space = form.space();
  BallPencil p;
  p.support = dilated.members;
  p.local_of.assign(space.vertex_count(), -1);
  for (int i = 0; i < static_cast<int>(p.support.size()); ++i)
    p.local_of[p.support[i]] = i;

  const int n = static_cast<int>(p.support.size());
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> diag(n, 0.0);
  const auto& edges = space.edges();
  const auto& cond = form.conductance();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    double c = cond[e];
    if (c == 0.0) continue;
    int ia = p.local_of[edges[e].a];
    int ib = p.local_of[edges[e].b];
    if (ia >= 0 && ib >= 0) {
      // Interior edge: both half-densities land in the support.
      diag[ia] += c;
      diag[ib] += c;
      trips.emplace_back(ia, ib, -c);
      trips.emplace_back(ib, ia, -c);
    } else if (ia >= 0 || ib >= 0) {
      // Crossing edge: only the inside half-density counts; the field is
      // zero outside, so the edge contributes c/2 * u_inside^2.
      diag[ia >= 0 ? ia : ib] += 0.5 * c;
      p.has_crossing = true;
    }
  }
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, diag[i]);
  p.K.resize(n, n);
  p.K.setFromTriplets(trips.begin(), trips.end());

  for (int v : inner.members) {
    int i = p.local_of[v];
    if (i < 0) continue;  // inner must sit inside dilated; tolerate clips
    p.mass_local.push_back(i);
  }
  p.mass.resize(static_cast<Eigen::Index>(p.mass_local.size()));
  for (std::size_t i = 0; i < p.mass_local.size(); ++i) {
    p.mass[i] = space.measure(p.support[p.mass_local[i]]);
    p.mass_total += p.mass[i];
  }
  return p;
}

}  // namespace

PoincareCertificate poincare_constant(const EnergyForm& form,
                                      const Space& metric, const Ball& ball,
                                      double k_dil) {
  if (!(k_dil >= 1.0)) throw std::invalid_argument("k_dil must be >= 1");
  Ball dilated =
      k_dil == 1.0 ? ball : metric.ball(ball.center, k_dil * ball.radius);

  if (dilated.members.size() < 2 || ball.members.size() < 2)
    throw std::runtime_error("degenerate form on ball");

  BallPencil p = build_pencil(form, ball, dilated);
  const int n = static_cast<int>(p.support.size());

  // Without crossing edges K is singular exactly on constants; pin one
  // vertex (solutions are later re-centered by the mass operator anyway).
  const bool pinned = !p.has_crossing;
  const int nr = pinned ? n - 1 : n;
  Eigen::SparseMatrix<double> Kred;
  if (pinned) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int k = 0; k < p.K.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(p.K, k); it; ++it)
        if (it.row() > 0 && it.col() > 0)
          trips.emplace_back(it.row() - 1, it.col() - 1, it.value());
    Kred.resize(nr, nr);
    Kred.setFromTriplets(trips.begin(), trips.end());
  } else {
    Kred = p.K;
  }

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Kred);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("degenerate form on ball");

  auto solveK = [&](const Eigen::VectorXd& y) {
    if (!pinned) return Eigen::VectorXd(llt.solve(y));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x.tail(nr) = llt.solve(Eigen::VectorXd(y.tail(nr)));
    return x;
  };

  std::uint64_t seed = 0xC1C1C1C1ull ^ (static_cast<std::uint64_t>(
                            ball.center) << 20) ^
                       static_cast<std::uint64_t>(ball.radius * 64.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = splitmix(seed) - 0.5;

  double lambda = 0.0;
  int iters = 0;
  const int max_iters = 50000;
  for (; iters < max_iters; ++iters) {
    Eigen::VectorXd w = p.apply_mass(v);
    double num = v.dot(w);
    double den = v.dot(p.K * v);
    double rq = den > 0.0 ? num / den : 0.0;
    Eigen::VectorXd next = solveK(w);
    double norm = next.norm();
    if (norm == 0.0) break;  // mass operator annihilated the iterate
    next /= norm;
    bool converged = iters > 2 && std::abs(rq - lambda) <=
                                      1e-14 * std::max(std::abs(rq), 1e-300);
    lambda = rq;
    v = next;
    if (converged) break;
  }

  // Self-consistent value: the Rayleigh quotient of the returned witness.
  Eigen::VectorXd w = p.apply_mass(v);
  double num = v.dot(w);
  double den = v.dot(p.K * v);
  if (!(den > 0.0) || !(num > 0.0))
    throw std::runtime_error("degenerate form on ball");
  lambda = num / den;

  PoincareCertificate cert;
  cert.ball = ball;
  cert.k_dil = k_dil;
  cert.c1_value = std::sqrt(lambda) / ball.radius;
  cert.iterations = iters;
  cert.boundary_clipped = !metric.is_proper(dilated);
  double vmax = v.cwiseAbs().maxCoeff();
  FieldFn witness(form.space().vertex_count(), FieldFn::Domain::BallRestricted);
  for (int i = 0; i < n; ++i) witness.values[p.support[i]] = v[i] / vmax;
  cert.witness = std::move(witness);
  return cert;
}

TauResult compute_tau(const Space& space, const Ball& ball,
                      const std::vector<double>& c0_field) {
  if (static_cast<int>(c0_field.size()) != space.vertex_count())
    throw std::invalid_argument("c0 field must cover the space");
  Ball doubled = space.ball(ball.center, 2.0 * ball.radius);
  double worst = 1.0;
  for (int v : doubled.members) {
    if (!(c0_field[v] > 0.0))
      throw std::invalid_argument("c0 must be positive on the doubled ball");
    worst = std::max(worst, 1.0 / c0_field[v]);
  }
  TauResult t;
  t.tau = std::sqrt(worst);
  t.boundary_clipped = !space.is_proper(doubled) ||
                       2.0 * ball.radius > space.max_radius();
  return t;
}

double ConstantLedger::c1_at(double r) const {
  if (c1_radii.empty()) throw std::runtime_error("empty c1 profile");
  double value = c1_envelope.front();
  for (std::size_t i = 0; i < c1_radii.size(); ++i)
    if (c1_radii[i] <= r) value = c1_envelope[i];
  return value;
}

ConstantLedger build_ledger(const EnergyForm& form, const Space& metric,
                            int center, double radius,
                            const LedgerOptions& options) {
  ConstantLedger led;
  led.active_center = center;
  led.active_radius = radius;
  led.k_dil = options.k_dil;
  led.c_abs = options.c_abs;

  const double r0 = metric.max_radius();

  std::vector<double> dradii = options.doubling_radii;
  if (dradii.empty()) {
    for (double r : {4.0, 8.0, 16.0})
      if (r <= r0) dradii.push_back(r);
    if (dradii.size() < 2) dradii = {r0 / 2.0, r0};
  }

  std::vector<int> centers;
  int stride =
      std::max(1, metric.vertex_count() / std::max(1, options.doubling_centers));
  for (int v = 0; v < metric.vertex_count(); v += stride) centers.push_back(v);

  DoublingEstimate doubling = estimate_doubling(metric, centers, dradii);
  led.nu = doubling.nu_hat;
  led.c0_field = doubling.c0_field;
  led.provenance.push_back("nu_hat: max pairwise volume-growth exponent over " +
                           std::to_string(centers.size()) + " centers");

  Ball active = metric.ball(center, radius);
  TauResult tau = compute_tau(metric, active, led.c0_field);
  led.tau = tau.tau;
  led.tau_clipped = tau.boundary_clipped;
  led.provenance.push_back(
      "tau: sup of 1/sqrt(c0) over the doubled active ball");

  std::vector<double> cradii = options.c1_radii;
  if (cradii.empty())
    cradii = {radius / 8.0, radius / 4.0, radius / 2.0, 0.75 * radius, radius};
  std::sort(cradii.begin(), cradii.end());
  led.c1_radii = cradii;
  led.c1_raw.assign(cradii.size(), kNaN);
  for (std::size_t i = 0; i < cradii.size(); ++i) {
    try {
      Ball b = metric.ball(center, cradii[i]);
      PoincareCertificate cert =
          poincare_constant(form, metric, b, options.k_dil);
      led.c1_raw[i] = cert.c1_value;
    } catch (const std::runtime_error&) {
      // degenerate small ball; the envelope covers it from above
    }
  }
  led.c1_envelope.assign(cradii.size(), 0.0);
  double running = 0.0;
  for (int i = static_cast<int>(cradii.size()) - 1; i >= 0; --i) {
    if (std::isfinite(led.c1_raw[i])) running = std::max(running, led.c1_raw[i]);
    led.c1_envelope[i] = running;
  }
  if (!(running > 0.0))
    throw std::runtime_error("degenerate form on ball");
  // Radii below the smallest defined sample inherit the global max.
  for (std::size_t i = 0; i < led.c1_envelope.size(); ++i)
    if (led.c1_envelope[i] == 0.0) led.c1_envelope[i] = running;
  led.provenance.push_back(
      "c1: top eigenvalue of the mass/energy pencil, monotone envelope");

  if (led.nu > 2.0) {
    led.q = 2.0 * led.nu / (led.nu - 2.0);
    led.provenance.push_back("q = 2 nu / (nu - 2)");
  } else {
    led.q = options.q_fallback;
    led.provenance.push_back("q: configured fallback (nu <= 2)");
  }
  if (!(led.q > 2.0)) throw std::invalid_argument("q must exceed 2");
  led.sigma = led.q / 2.0;
  led.s_exp = 2.0 * led.sigma;
  led.d = led.sigma / (led.sigma - 1.0);
  led.gamma = moser_gamma(led.c_abs, led.d);
  led.provenance.push_back("gamma: 8 c_abs times the contraction series");

  double c1_half = led.c1_at(radius / 2.0);
  led.mu = led.tau * led.tau * led.tau * c1_half;
  led.mu_prime = led.tau * c1_half;
  led.provenance.push_back("mu = tau^3 c1(r/2), mu' = tau c1(r/2)");
  return led;
}

SobolevReport sobolev_check(const EnergyForm& form, const Ball& ball,
                            const ConstantLedger& ledger,
                            const std::vector<FieldFn>& trial_fns) {
  const Space& space = form.space();
  const double s = ledger.s_exp;
  const double factor =
      ledger.tau * ledger.tau * ledger.tau * ledger.c1_at(ball.radius) *
      ball.radius;

  std::vector<char> inside(space.vertex_count(), 0);
  for (int v : ball.members) inside[v] = 1;

  SobolevReport rep;
  rep.trials = static_cast<int>(trial_fns.size());
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (const FieldFn& u : trial_fns) {
    if (u.size() != space.vertex_count())
      throw std::invalid_argument("field dimension mismatch");
    for (int v = 0; v < space.vertex_count(); ++v)
      if (!inside[v] && u.values[v] != 0.0)
        throw std::invalid_argument("trial not supported in ball");

    double umax = 0.0;
    for (int v : ball.members) umax = std::max(umax, std::abs(u.values[v]));
    double lhs = 0.0;
    if (umax > 0.0) {
      double acc = 0.0;
      for (int v : ball.members)
        acc += std::pow(std::abs(u.values[v]) / umax, s) * space.measure(v);
      lhs = umax * std::pow(acc / ball.measure, 1.0 / s);
    }

    FieldFn density = form.energy_measure(u, u);
    double energy = 0.0;
    for (int v : ball.members) energy += density.values[v];
    double rhs = factor * std::sqrt(std::max(energy, 0.0) / ball.measure);

    double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<
                                                double>::infinity()
                                                      : 0.0);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.min_slack = std::min(rep.min_slack, rhs - lhs);
    if (lhs > rhs) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

std::vector<FieldFn> make_bump_trials(const Space& metric, const Ball& ball,
                                      int count, std::uint64_t seed) {
  std::uint64_t state = seed ? seed : 1;
  std::vector<FieldFn> trials;
  trials.reserve(count);
  for (int t = 0; t < count; ++t) {
    int pick = static_cast<int>(splitmix(state) * ball.members.size());
    pick = std::min<int>(pick, static_cast<int>(ball.members.size()) - 1);
    int center = ball.members[pick];
    double width = 1.0 + splitmix(state) * std::max(ball.radius - 1.0, 0.0);
    double amp = 0.25 + splitmix(state);
    auto dist = metric.distances_from(center);
    FieldFn u(metric.vertex_count(), FieldFn::Domain::BallRestricted);
    for (int v : ball.members) {
      double d = (*dist)[v] / width;
      u.values[v] = amp * std::exp(-d * d);
    }
    trials.push_back(std::move(u));
  }
  return trials;
}

}  // namespace harnack
