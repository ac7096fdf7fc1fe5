#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cr3/core.hpp"
#include "cr3/sampling.hpp"

namespace cr3 {

/// Prescribed bending and twist as functions of the natural parameter.
struct InvariantProfile {
  std::function<double(double)> kappa;
  std::function<double(double)> tau;

  static InvariantProfile constant(double kappa, double tau);
  /// Cubic Hermite interpolation of tabulated values (finite-difference
  /// slopes); clamps outside the table.
  static InvariantProfile sampled(std::vector<double> s, std::vector<double> kappa,
                                  std::vector<double> tau);
};

struct Reconstruction {
  std::vector<double> params;
  std::vector<PseudoMatrix> frames;
  double max_group_defect = 0.0;  // worst |F^H h F - h| after projection
  double max_step_error = 0.0;    // worst Richardson estimate per step

  /// The first frame column as a lift-valued arc.
  SampledCurve curve() const;
  /// The same, as one period of a closed curve. Throws NotClosed when the
  /// final point is not the initial one.
  SampledCurve closed_curve(double tol = 1e-7) const;
};

/// Integrates F' = F K(kappa(s), tau(s)) on [s0, s1] with fixed-step RK4,
/// projecting onto the group after every step. Each step is also taken as two
/// half steps; the difference gives the error estimate and the half-step
/// result is kept. Throws AlgebraViolation for a bad F0, StepRejected when the
/// estimate exceeds step_tol.
Reconstruction reconstruct(const InvariantProfile& profile, const PseudoMatrix& F0, double s0,
                           double s1, double step, double step_tol = 1e-8);

/// Nearest group element in the h-polar sense, then det normalized to 1.
PseudoMatrix project_to_group(const PseudoMatrix& F);

struct Congruence {
  bool congruent = false;
  double shift = 0.0;  // s0 with Gamma_B(s) ~ eps A Gamma_A(s + s0)
  std::optional<PseudoMatrix> transform;
  Complex center = 1.0;  // eps
  double profile_mismatch = 0.0;
  double curve_mismatch = 0.0;
};

/// Decides whether two closed natural Wilczynski lifts differ by a group
/// element and a parameter shift. Throws NotClosed, NotNatural.
Congruence congruence_test(const SampledCurve& a, const SampledCurve& b, double tol = 1e-6);

}  // namespace cr3
