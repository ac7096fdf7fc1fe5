#pragma once

#include <array>
#include <vector>

#include "cr3/iso.hpp"
#include "cr3/sampling.hpp"

namespace cr3 {

/// Integral of the strain density over one period of a closed curve.
double total_strain(const SampledCurve& closed);

/// tau + 9 kappa^2; zero exactly on critical curves.
double criticality_residual(double kappa, double tau);

/// The quartic in rho^2 whose roots are the critical Clifford parameters of
/// second-kind configurations, in its printed form.
double criticality_quartic(double r, double rho);

/// Printed candidates f_1..f_4 for rho^2 and the printed closed form for rho.
std::array<double, 4> printed_rho2_candidates(double r);
double printed_critical_rho2(double r);

struct CriticalRho {
  double rho = 0.0;
  double residual = 0.0;  // tau + 9 kappa^2 at rho, closed forms
  double kappa = 0.0;
  double tau = 0.0;
  // Comparison data.
  double printed_rho2 = 0.0;
  std::array<double, 4> f{};
  bool f3_in_claimed_range = false;  // 6 - 4 sqrt 2 < f_3 < 2
  double quartic_at_root = 0.0;      // relative to the largest term
  std::vector<double> quartic_roots_rho2;
};

/// Root of tau + 9 kappa^2 over rho in (0, sqrt 2) for second-kind closed
/// forms: 200 bracketing intervals, then bisection. Throws DomainError, NoRoot,
/// MultipleRoots.
CriticalRho critical_rho(const RationalRatio& r);

struct CriticalConfig {
  long p = 0, q = 0;
  RationalRatio r;
  CriticalRho root;
  ConfigClosedForms forms;
  double lift_residual = 0.0;  // tau + 9 kappa^2 from the emitted lift
};

/// Second-kind configuration of torus type (p, q), 0 < p/q < 1, with the
/// critical Clifford parameter.
CriticalConfig critical_config(long p, long q);

}  // namespace cr3
