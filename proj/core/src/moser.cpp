#include "harnack/moser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace harnack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ball-normalized L^p norm of u over the members, computed against the
/// max to keep large exponents in range.
double lp_norm(const Space& space, const std::vector<int>& members,
               double measure, const FieldFn& u, double p) {
  double umax = 0.0;
  for (int v : members) umax = std::max(umax, std::abs(u.values[v]));
  if (umax == 0.0) return 0.0;
  double acc = 0.0;
  for (int v : members)
    acc += std::pow(std::abs(u.values[v]) / umax, p) * space.measure(v);
  return umax * std::pow(acc / measure, 1.0 / p);
}

double average_power(const Space& space, const Ball& ball, const FieldFn& u,
                     double p) {
  double acc = 0.0;
  for (int v : ball.members)
    acc += std::pow(u.values[v], p) * space.measure(v);
  return acc / ball.measure;
}

}  // namespace

TruncatedPower::TruncatedPower(double beta_, double M_) : beta(beta_), M(M_) {
  if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
  if (!(M > 0.0)) throw std::invalid_argument("M must be > 0");
}

double TruncatedPower::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  if (t <= M) return std::pow(t, beta);
  return std::pow(M, beta) + beta * std::pow(M, beta - 1.0) * (t - M);
}

double TruncatedPower::derivative(double t) const {
  if (t <= 0.0) return beta == 1.0 ? 1.0 : 0.0;
  if (t <= M) return beta * std::pow(t, beta - 1.0);
  return beta * std::pow(M, beta - 1.0);
}

IterationSchedule::IterationSchedule(double alpha_, double p_start_,
                                     double sigma_)
    : alpha(alpha_), p_start(p_start_), sigma(sigma_) {
  if (!(alpha >= 0.5 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in [1/2, 1)");
  if (!(sigma > 1.0)) throw std::invalid_argument("supercriticality lost");
}

double IterationSchedule::exponent(int j) const {
  return std::pow(sigma, j) * p_start;
}

int IterationSchedule::j_max() const {
  int j = 0;
  while (std::pow(sigma, j) * std::abs(p_start) <= max_exponent) ++j;
  return j;
}

SupBoundReport subsolution_sup_bound(const EnergyForm& form,
                                     const Space& metric, const Ball& ball,
                                     const FieldFn& u,
                                     const IterationSchedule& schedule,
                                     const ConstantLedger& ledger) {
  if (!(schedule.sigma > 1.0))
    throw std::invalid_argument("supercriticality lost");
  if (!(schedule.p_start >= 2.0))
    throw std::invalid_argument("sup bound needs p >= 2");
  for (int v : ball.members)
    if (u.values[v] < 0.0)
      throw std::invalid_argument("subsolution input must be non-negative");
  SolutionReport cls = classify(form, ball, u);
  if (cls.solution_class != SolutionClass::Subsolution &&
      cls.solution_class != SolutionClass::Harmonic)
    throw std::invalid_argument("non-subsolution input");

  const double r = ball.radius;
  const double alpha = schedule.alpha;
  const double prefactor_base = ledger.c_abs * ledger.tau * ledger.tau *
                                ledger.tau * ledger.c1_at(r / 2.0) /
                                (1.0 - alpha);
  const double expo = 2.0 * schedule.sigma / (schedule.sigma - 1.0);
  const double avg_p = average_power(form.space(), ball, u, schedule.p_start);

  SupBoundReport rep;
  rep.bound = std::pow(std::pow(prefactor_base, expo) * avg_p,
                       1.0 / schedule.p_start);

  const int jmax = schedule.j_max();
  for (int j = 0; j <= jmax; ++j) {
    Ball bj = metric.ball(ball.center, schedule.s(j) * r);
    CascadeRow row;
    row.s = schedule.s(j);
    row.exponent = schedule.exponent(j);
    row.lp_norm =
        lp_norm(form.space(), bj.members, bj.measure, u, row.exponent);
    rep.cascade.push_back(row);
  }

  Ball balpha = metric.ball(ball.center, alpha * r);
  rep.measured_sup = field::max_over(u, balpha.members);
  rep.measured_ok = rep.measured_sup <= rep.bound;
  return rep;
}

AllPReport all_p_bound(const EnergyForm& form, const Space& metric,
                       const Ball& ball, const FieldFn& u, double p,
                       const IterationSchedule& schedule,
                       const ConstantLedger& ledger) {
  if (p == 0.0 || p == 1.0) throw std::invalid_argument("excluded exponent");
  if (!(p <= 2.0))
    throw std::invalid_argument("all-p bound needs p <= 2");
  if (!(schedule.sigma > 1.0))
    throw std::invalid_argument("supercriticality lost");
  double floor = field::min_over(u, ball.members);
  if (!(floor > 0.0))
    throw std::invalid_argument("field not bounded below by a positive delta");

  const double r = ball.radius;
  const double alpha = schedule.alpha;
  const double base = (ledger.c_abs * ledger.tau * ledger.tau * ledger.tau *
                           ledger.c1_at(r / 2.0) * std::abs(p) +
                       1.0) /
                      (1.0 - alpha);
  const double expo = 2.0 * schedule.sigma / (schedule.sigma - 1.0);

  AllPReport rep;
  rep.p = p;
  rep.bound = std::pow(base, expo) * average_power(form.space(), ball, u, p);

  Ball balpha = metric.ball(ball.center, alpha * r);
  double sup_up = 0.0;
  for (int v : balpha.members)
    sup_up = std::max(sup_up, std::pow(u.values[v], p));
  rep.measured_sup = sup_up;
  rep.measured_ok = rep.measured_sup <= rep.bound;
  return rep;
}

LogEstimateReport log_weak_estimate(const EnergyForm& form,
                                    const Space& metric, const Ball& ball,
                                    double alpha, const FieldFn& u,
                                    const ConstantLedger& ledger,
                                    const std::vector<double>& lambdas) {
  if (!(alpha >= 0.5 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in [1/2, 1)");
  for (int v : ball.members)
    if (!(u.values[v] > 0.0))
      throw std::invalid_argument("field must be positive on the ball");
  SolutionReport cls = classify(form, ball, u);
  if (cls.solution_class != SolutionClass::Supersolution &&
      cls.solution_class != SolutionClass::Harmonic)
    throw std::invalid_argument("non-supersolution input");

  const Space& space = form.space();
  const double r = ball.radius;
  Ball balpha = metric.ball(ball.center, alpha * r);

  LogEstimateReport rep;
  rep.ball_alpha_measure = balpha.measure;
  rep.lambdas = lambdas;

  double log_avg = 0.0;
  for (int v : balpha.members)
    log_avg += std::log(u.values[v]) * space.measure(v);
  log_avg /= balpha.measure;
  rep.k = std::exp(log_avg);

  rep.envelope_c =
      ledger.c_abs * ledger.tau * ledger.c1_at(r) / (1.0 - alpha);
  for (double lambda : lambdas) {
    double tail = 0.0;
    for (int v : balpha.members)
      if (std::abs(std::log(u.values[v]) - log_avg) > lambda)
        tail += space.measure(v);
    rep.tails.push_back(tail);
    if (tail > rep.envelope_c / lambda * balpha.measure) rep.tails_ok = false;
  }

  // Energy of log u over the alpha-ball against the cutoff budget.
  FieldFn logu(space.vertex_count());
  for (int v = 0; v < space.vertex_count(); ++v)
    logu.values[v] = u.values[v] > 0.0 ? std::log(u.values[v]) : 0.0;
  FieldFn density = form.energy_measure(logu, logu);
  for (int v : balpha.members) rep.energy_measured += density.values[v];

  CutoffFn eta = make_cutoff(form, ball.center, r, alpha, 1.0);
  FieldFn eta_density = form.energy_measure(eta.values, eta.values);
  double support_mass = 0.0;
  for (int v = 0; v < space.vertex_count(); ++v)
    if (eta_density.values[v] > 0.0) support_mass += space.measure(v);
  const double width2 = (1.0 - alpha) * (1.0 - alpha) * r * r;
  rep.energy_bound = 4.0 * eta.c_cut * support_mass / width2;
  rep.b_constant = rep.energy_bound * width2 / balpha.measure;
  rep.energy_ok = rep.energy_measured <= rep.energy_bound;
  return rep;
}

double SupProfile::at(double s_query) const {
  if (s.empty()) throw std::invalid_argument("empty profile");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] >= s_query) return phi[i];
  return phi.back();
}

MoserBound moser_abstract_bound(const SupProfile& phi_data, double mu,
                                double mu_prime, double d, double c) {
  if (!(mu > 0.0) || !(mu_prime > 0.0))
    throw std::invalid_argument("mu and mu' must be positive");
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (phi_data.s.size() != phi_data.phi.size())
    throw std::invalid_argument("profile size mismatch");
  for (std::size_t i = 1; i < phi_data.phi.size(); ++i) {
    if (phi_data.s[i] < phi_data.s[i - 1] ||
        phi_data.phi[i] < phi_data.phi[i - 1])
      throw std::invalid_argument("phi must be nondecreasing");
  }

  MoserBound mb;
  mb.d = d;
  mb.c_abs = c;
  mb.mu = mu;
  mb.mu_prime = mu_prime;
  mb.gamma1 = 8.0 * c;
  SeriesResult series = contraction_series(2.0 * d);
  mb.gamma = mb.gamma1 * series.value;
  mb.series_terms = series.terms;
  mb.series_certified = series.certified;
  mb.log_bound = mb.gamma * mu * mu * mu_prime;
  mb.bound = mb.log_bound < 700.0 ? std::exp(mb.log_bound) : kInf;

  if (!phi_data.s.empty()) {
    mb.phi_half = phi_data.at(0.5);
    mb.phi_check_ok = mb.phi_half <= mb.gamma * mu * mu;
  }
  return mb;
}

HarnackReport harnack_verify(const EnergyForm& form, const Space& metric,
                             const Ball& ball, SamplerKind sampler,
                             const ConstantLedger& ledger, int n_samples,
                             const std::vector<double>& deltas,
                             std::uint64_t seed) {
  const Space& space = form.space();
  Ball quad = metric.ball(ball.center, 4.0 * ball.radius);
  if (!metric.is_proper(quad))
    throw std::invalid_argument("4R ball escapes the space");

  HarnackReport rep;
  rep.deltas = deltas;
  rep.log_bound = ledger.gamma * ledger.mu * ledger.mu * ledger.mu_prime;
  rep.bound = rep.log_bound < 700.0 ? std::exp(rep.log_bound) : kInf;
  rep.max_ratio_per_delta.assign(deltas.size(), 0.0);

  Ball half = metric.ball(ball.center, 0.5 * ball.radius);
  Ball norm_ball = metric.ball(ball.center, 0.75 * ball.radius);
  const bool norm_ok = metric.is_proper(norm_ball);
  std::vector<int> collar = boundary_layer(space, ball);

  BoundarySampler gen(sampler, seed, 0.0);
  for (int id = 0; id < n_samples; ++id) {
    FieldFn unit = gen.sample(space, ball, collar);
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      double delta = deltas[di];
      FieldFn g(space.vertex_count(), FieldFn::Domain::BallRestricted);
      for (int v : collar)
        g.values[v] = delta + (1.0 - delta) * unit.values[v];

      SolutionReport sol = solve_harmonic(form, ball, g);
      double sup = field::max_over(sol.u, half.members);
      double inf = field::min_over(sol.u, half.members);
      if (!(inf > 0.0) || !norm_ok) {
        ++rep.excluded;
        continue;
      }
      double k_log = 0.0;
      for (int v : norm_ball.members)
        k_log += std::log(sol.u.values[v]) * space.measure(v);
      k_log /= norm_ball.measure;

      HarnackRow row;
      row.sample_id = id;
      row.delta = delta;
      row.sup = sup;
      row.inf = inf;
      row.ratio = sup / inf;
      row.log_ratio = std::log(sup) - std::log(inf);
      row.k_norm = std::exp(k_log);
      row.pass = row.log_ratio <= rep.log_bound;
      if (!row.pass) rep.pass = false;
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.max_ratio_per_delta[di] =
          std::max(rep.max_ratio_per_delta[di], row.ratio);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

ProductBound iteration_product_bound(
    const IterationSchedule& schedule,
    const std::function<double(double)>& c1_fn, double r, double tau,
    double nu, double c_abs) {
  const double p = schedule.p_start;
  const double sigma = schedule.sigma;
  const double tau3 = tau * tau * tau;

  double log_lhs = 0.0;
  for (int j = 0; j < 100000; ++j) {
    double weight = 2.0 / (std::pow(sigma, j) * p);
    double beta_j = std::pow(sigma, j) * p / 2.0;
    double factor = tau3 * c1_fn(schedule.s(j) * r) *
                    std::pow(schedule.s(j + 1) / schedule.s(j), nu / 2.0) *
                    beta_j * schedule.a(j);
    double increment = weight * std::log(factor);
    log_lhs += increment;
    if (j > 4 && std::abs(increment) <
                     1e-15 * std::max(std::abs(log_lhs), 1.0))
      break;
  }

  double log_rhs = (2.0 / p) * (sigma / (sigma - 1.0)) *
                   std::log(c_abs * c1_fn(r / 2.0) * tau3 /
                            (1.0 - schedule.alpha));

  ProductBound pb;
  pb.lhs = std::exp(log_lhs);
  pb.rhs = std::exp(log_rhs);
  pb.holds = log_lhs <= log_rhs;
  return pb;
}

}  // namespace harnack
