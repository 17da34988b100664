#ifndef HARNACK_INEQUALITIES_HPP
#define HARNACK_INEQUALITIES_HPP

#include "harnack/forms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace harnack {

/// Ball-wise Poincare constant: c1 realizes
///   int_B |u - avg_B u|^2 dm <= c1^2 R^2 int_{B_kR} mu(u,u)
/// over fields supported in the dilated ball, with the witness attaining
/// the extremal ratio (top eigenvalue of the mass/energy pencil).
struct PoincareCertificate {
  Ball ball;
  double k_dil = 1.0;
  double c1_value = 0.0;
  FieldFn witness;
  bool boundary_clipped = false;
  int iterations = 0;
};

PoincareCertificate poincare_constant(const EnergyForm& form,
                                      const Space& metric, const Ball& ball,
                                      double k_dil = 1.0);

struct TauResult {
  double tau = 1.0;
  bool boundary_clipped = false;
};

/// tau = (sup over B(x, 2R) of 1/c0(y))^(1/2) >= 1. Flags the result when
/// the doubled ball is not a proper ball of the space.
TauResult compute_tau(const Space& space, const Ball& ball,
                      const std::vector<double>& c0_field);

/// All structural constants of a run, with provenance notes. c1 values are
/// kept both raw (as measured) and as the nonincreasing envelope.
struct ConstantLedger {
  double nu = 0.0;
  std::vector<double> c0_field;
  std::vector<double> c1_radii;     // ascending
  std::vector<double> c1_raw;       // NaN where the eigenproblem degenerates
  std::vector<double> c1_envelope;  // nonincreasing in the radius
  double tau = 1.0;
  bool tau_clipped = false;
  double q = 4.0;
  double sigma = 2.0;
  double s_exp = 4.0;
  double k_dil = 1.0;
  double c_abs = 16.0;
  double d = 2.0;      // sigma/(sigma-1)
  double gamma = 0.0;  // 8 c_abs * contraction series at 2d
  double mu = 0.0;     // tau^3 c1(r/2)
  double mu_prime = 0.0;  // tau c1(r/2)
  double active_radius = 0.0;
  int active_center = -1;
  std::vector<std::string> provenance;

  /// Envelope value at the largest grid radius <= r (global max below the
  /// grid); an upper estimate of the decreasing c1 at r.
  double c1_at(double r) const;
};

struct LedgerOptions {
  std::vector<double> doubling_radii;  // empty: {4, 8, 16} clipped to R0
  std::vector<double> c1_radii;        // empty: dyadic fractions of the ball
  double k_dil = 1.0;
  double q_fallback = 4.0;  // used when nu_hat <= 2
  double c_abs = 16.0;
  int doubling_centers = 25;
};

/// Estimate every constant for the given form and ball. `metric` carries
/// the distance used for balls (the intrinsic space of a degenerate form);
/// vertex indices of `metric` and of form.space() must agree.
ConstantLedger build_ledger(const EnergyForm& form, const Space& metric,
                            int center, double radius,
                            const LedgerOptions& options = {});

struct SobolevReport {
  int trials = 0;
  int violations = 0;
  double max_ratio = 0.0;  // LHS / RHS over trials
  double min_slack = 0.0;  // min of RHS - LHS
  bool pass = true;
};

/// Check the ball-normalized s-norm against tau^3 c1(R) R times the
/// ball-normalized energy for each trial supported in the ball.
SobolevReport sobolev_check(const EnergyForm& form, const Ball& ball,
                            const ConstantLedger& ledger,
                            const std::vector<FieldFn>& trial_fns);

/// Deterministic bump trials supported in the ball (for Monte-Carlo
/// Sobolev verification).
std::vector<FieldFn> make_bump_trials(const Space& metric, const Ball& ball,
                                      int count, std::uint64_t seed);

}  // namespace harnack

#endif
