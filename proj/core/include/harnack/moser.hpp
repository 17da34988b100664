#ifndef HARNACK_MOSER_HPP
#define HARNACK_MOSER_HPP

#include "harnack/inequalities.hpp"
#include "harnack/series.hpp"
#include "harnack/solve.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace harnack {

/// Power map truncated to affine growth past M: t^beta on [0, M], then
/// M^beta + beta M^(beta-1) (t - M). Keeps the derivative bounded so the
/// map is admissible for bounded fields.
struct TruncatedPower {
  double beta = 1.0;
  double M = 1.0;

  TruncatedPower(double beta_, double M_);
  double operator()(double t) const;
  double derivative(double t) const;
};

/// Shrinking-ball schedule s_j = alpha + (1-alpha)/(j+1) with exponent
/// ladder sigma^j p. a(j) is the positive magnitude s_j / (s_j - s_{j+1}).
struct IterationSchedule {
  double alpha = 0.5;
  double p_start = 2.0;
  double sigma = 2.0;
  double max_exponent = 64.0;

  IterationSchedule(double alpha_, double p_start_, double sigma_);

  double s(int j) const { return alpha + (1.0 - alpha) / (j + 1); }
  double a(int j) const { return s(j) / (s(j) - s(j + 1)); }
  double exponent(int j) const;
  /// Smallest j with sigma^j |p| > max_exponent.
  int j_max() const;
};

struct CascadeRow {
  double s = 0.0;
  double exponent = 0.0;
  double lp_norm = 0.0;  // ball-normalized L^exponent norm over B_{s r}
};

struct SupBoundReport {
  double bound = 0.0;         // closed-form bound on ess sup over B_alpha
  double measured_sup = 0.0;  // scan of u over B_alpha
  bool measured_ok = false;
  std::vector<CascadeRow> cascade;
};

/// Subsolution sup bound: sup over the alpha-ball is controlled by the
/// ball average of u^p times (c tau^3 c1(r/2)/(1-alpha))^(2 sigma/(sigma-1)).
/// Also walks the reverse-Hoelder ladder and reports the measured norms.
SupBoundReport subsolution_sup_bound(const EnergyForm& form,
                                     const Space& metric, const Ball& ball,
                                     const FieldFn& u,
                                     const IterationSchedule& schedule,
                                     const ConstantLedger& ledger);

struct AllPReport {
  double p = 0.0;
  double bound = 0.0;         // bound on sup over B_alpha of u^p
  double measured_sup = 0.0;  // scan of u^p over B_alpha
  bool measured_ok = false;
};

/// All-exponent bound (p <= 2, p not in {0,1}): sup of u^p over the
/// alpha-ball against ((c tau^3 c1(r/2)|p| + 1)/(1-alpha))^(2s/(s-1))
/// times the ball average of u^p. Negative p controls the infimum.
AllPReport all_p_bound(const EnergyForm& form, const Space& metric,
                       const Ball& ball, const FieldFn& u, double p,
                       const IterationSchedule& schedule,
                       const ConstantLedger& ledger);

struct LogEstimateReport {
  double k = 0.0;  // exp of the measure-average of log u over B_alpha
  double envelope_c = 0.0;  // c_abs tau c1(r) / (1-alpha)
  std::vector<double> lambdas;
  std::vector<double> tails;  // m({x in B_alpha : |log(u/k)| > lambda})
  bool tails_ok = true;
  double ball_alpha_measure = 0.0;
  double energy_measured = 0.0;  // sum over B_alpha of mu(log u, log u)
  double energy_bound = 0.0;     // 4 C_cut m(supp) / ((1-alpha)^2 r^2)
  double b_constant = 0.0;       // energy_bound (1-alpha)^2 r^2 / m(B_alpha)
  bool energy_ok = true;
};

/// Weak L^1-type estimate for log u of a positive supersolution: the
/// geometric-mean normalizer k and the measured super-level tails against
/// the C/lambda envelope.
LogEstimateReport log_weak_estimate(const EnergyForm& form,
                                    const Space& metric, const Ball& ball,
                                    double alpha, const FieldFn& u,
                                    const ConstantLedger& ledger,
                                    const std::vector<double>& lambdas = {
                                        0.5, 1.0, 2.0, 4.0});

/// Measured sup-profile of log f over the nested balls, s in [1/2, 1],
/// nondecreasing in s.
struct SupProfile {
  std::vector<double> s;
  std::vector<double> phi;

  double at(double s_query) const;  // value at the smallest sample >= s
};

struct MoserBound {
  double gamma1 = 0.0;
  double gamma = 0.0;
  double d = 0.0;
  double c_abs = 0.0;
  double mu = 0.0;
  double mu_prime = 0.0;
  double log_bound = 0.0;  // gamma mu^2 mu'
  double bound = 1.0;      // exp(log_bound); +inf when it overflows
  int series_terms = 0;
  bool series_certified = false;
  double phi_half = 0.0;
  bool phi_check_ok = true;
};

/// Abstract sup bound from the two hypotheses (reverse-Hoelder cascade and
/// weak log tail): gamma1 = 8c, gamma = gamma1 * contraction series, bound
/// exp(gamma mu^2 mu'). The provided profile must be normalized (unit tail
/// constant) and is checked against phi(1/2) <= gamma mu^2.
MoserBound moser_abstract_bound(const SupProfile& phi_data, double mu,
                                double mu_prime, double d, double c);

struct HarnackRow {
  int sample_id = 0;
  double delta = 0.0;
  double sup = 0.0;
  double inf = 0.0;
  double ratio = 0.0;
  double log_ratio = 0.0;
  double k_norm = 0.0;
  bool pass = false;
};

struct HarnackReport {
  std::vector<HarnackRow> rows;
  double log_bound = 0.0;
  double bound = 0.0;  // may be +inf
  double max_ratio = 0.0;
  int excluded = 0;
  bool pass = true;
  std::vector<double> deltas;
  std::vector<double> max_ratio_per_delta;
};

/// Solve n_samples harmonic problems with positive boundary data at each
/// delta floor, scan sup/inf over the half ball, and compare every ratio
/// against exp(gamma mu^2 mu') from the ledger.
HarnackReport harnack_verify(const EnergyForm& form, const Space& metric,
                             const Ball& ball, SamplerKind sampler,
                             const ConstantLedger& ledger, int n_samples,
                             const std::vector<double>& deltas,
                             std::uint64_t seed);

struct ProductBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Numeric product bound behind the subsolution lemma: the infinite
/// product of per-step factors [tau^3 c1(s_j r) (s_{j+1}/s_j)^(nu/2)
/// beta_j a_j]^(2/(sigma^j p)), beta_j = sigma^j p / 2, against
/// (c_abs c1(r/2) tau^3/(1-alpha))^((2/p) sigma/(sigma-1)).
ProductBound iteration_product_bound(
    const IterationSchedule& schedule,
    const std::function<double(double)>& c1_fn, double r, double tau,
    double nu, double c_abs);

}  // namespace harnack

#endif
