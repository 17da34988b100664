#ifndef HARNACK_SOLVE_HPP
#define HARNACK_SOLVE_HPP

#include "harnack/forms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace harnack {

enum class SolutionClass { Harmonic, Subsolution, Supersolution, None };

std::string to_string(SolutionClass c);

/// Result of a harmonic solve or of classifying a candidate field on a
/// ball. `residual` is the largest |a(u, e_x)| over interior vertices (for
/// sub/supersolutions the worst signed violation).
struct SolutionReport {
  FieldFn u;
  SolutionClass solution_class = SolutionClass::None;
  double residual = 0.0;
  double delta_floor = 0.0;
};

/// Dirichlet collar: vertices outside the open ball adjacent to a member.
std::vector<int> boundary_layer(const Space& space, const Ball& ball);

/// Minimize a(u,u) over the ball interior with the collar values of
/// `boundary` held fixed. Conjugate gradients with Jacobi preconditioning;
/// systems below 400 unknowns go to a dense factorization instead.
SolutionReport solve_harmonic(const EnergyForm& form, const Ball& ball,
                              const FieldFn& boundary);

/// Determine harmonic / subsolution / supersolution from the signs of
/// a(u, e_x) over interior vertices, at relative tolerance rtol scaled by
/// max conductance times the oscillation of u on ball + collar.
SolutionReport classify(const EnergyForm& form, const Ball& ball,
                        const FieldFn& u, double rtol = 1e-8);

/// u + delta; harmonicity is preserved since constants are harmonic.
FieldFn lift_by_delta(const FieldFn& u, double delta);

enum class SamplerKind { Uniform, Bump, TwoLevel };

SamplerKind sampler_from_string(const std::string& s);

/// Deterministic boundary-data generator: given the collar vertices,
/// fills values in [delta, 1] according to the sampler kind. The rng state
/// fully determines the output.
class BoundarySampler {
 public:
  BoundarySampler(SamplerKind kind, std::uint64_t seed, double delta);

  /// Fresh boundary field (zero off the collar). Advances the stream.
  FieldFn sample(const Space& space, const Ball& ball,
                 const std::vector<int>& collar);

  double delta() const { return delta_; }

 private:
  double next_unit();

  SamplerKind kind_;
  std::uint64_t state_;
  double delta_;
};

}  // namespace harnack

#endif
