#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "cr3/core.hpp"
#include "cr3/sampling.hpp"

namespace cr3 {

/// Exact spectral ratio m/n, reduced, n > 0.
struct RationalRatio {
  long m = -1;
  long n = 1;

  double value() const { return static_cast<double>(m) / static_cast<double>(n); }
  std::string str() const;
  bool operator==(const RationalRatio&) const = default;
};

/// Reduces m/n (n != 0) to lowest terms with positive denominator.
RationalRatio make_ratio(long m, long n);

/// Parses "M/N" or an integer "M". Decimal input is rejected with
/// InvalidArgument.
RationalRatio parse_ratio(const std::string& text);

enum class ConfigKind { First, Second };
const char* to_string(ConfigKind k);

struct IsoparametricSpec {
  ConfigKind kind = ConfigKind::Second;
  RationalRatio r;
  double rho = 0.0;
};

/// Upper bound for rho^2 on first-kind configurations:
/// 2(-3 + 2 sqrt(2 - r - r^2)) / (1 + 2r).
double first_kind_rho2_bound(double r);

/// Throws DomainError naming the violated bound.
void check_domain(const IsoparametricSpec& spec);

enum class StringClass { First, Second, NotClosable };
const char* to_string(StringClass c);

struct SpectralAnalysis {
  double kappa = 0.0;
  double tau = 0.0;
  double discriminant = 0.0;
  std::array<double, 3> e{};
  std::array<PseudoVector, 3> V{};
  std::array<double, 3> phi{};  // <V_j, V_j>
  std::array<CausalCharacter, 3> causal{};
  double ratio = 0.0;  // e1 / e3
  StringClass cls = StringClass::NotClosable;
};

SpectralAnalysis analyze(double kappa, double tau);

/// Eigenvalue pattern of the diagonal generator, in coordinate order.
std::array<double, 3> exponent_pattern(ConfigKind kind, double r);

/// Change of basis diagonalizing the torus.
const PseudoMatrix& torus_basis();

/// S(rho) = (1, rho, i rho^2 / 2).
PseudoVector slice_point(double rho);

struct NormalizationResult {
  double c = 0.0;       // time scale mu / (1 - mu)
  double mu = 0.0;
  Complex sigma = 0.0;  // complex scale of the lift
  double residual = 0.0;
  int iterations = 0;
  bool reference_seed = false;  // converged from the closed-form seed
};

/// Solves det(Gamma, Gamma', Gamma'') = -1 and <Gamma, Gamma'> = i for the
/// torus-orbit lift sigma U exp(-i c diag(e) s) U^{-1} S(rho) by damped
/// Newton in (c, Re sigma, Im sigma). Throws DomainError, NoConvergence.
NormalizationResult normalization_oracle(const IsoparametricSpec& spec);

/// Closed forms quoted for the symmetric configurations, evaluated as
/// written; used only for comparison against the oracle.
namespace reference {
double mu(ConfigKind kind, double r, double rho);
/// Real scale sigma_1 / sigma_2 (the lift carries -sigma_1 for the first kind).
double sigma(ConfigKind kind, double r, double rho);
double kappa(ConfigKind kind, double r, double rho);
double tau(ConfigKind kind, double r, double rho);
/// Twist of the first kind with the leading factor 3 in place of 9.
double tau_first_kind_corrected(double r, double rho);
}  // namespace reference

struct KnotType {
  long p = 0;
  long q = 0;
  std::string str() const;
  bool operator==(const KnotType&) const = default;
};

KnotType knot_type(ConfigKind kind, const RationalRatio& r);

struct SpinAnomaly {
  int spin_denominator = 1;  // 1 or 3
  int anomaly_thirds = 0;    // anomaly = 2 pi * anomaly_thirds / 3
  double anomaly() const;
  Complex phase() const;     // exp(i anomaly)
  std::string spin_str() const;
  std::string anomaly_str() const;
};

SpinAnomaly spin_anomaly(const RationalRatio& r);

int maslov_closed(ConfigKind kind, const RationalRatio& r);

struct ConfigClosedForms {
  IsoparametricSpec spec;
  NormalizationResult norm;
  double kappa = 0.0;  // recomputed from exact derivatives of the lift
  double tau = 0.0;
  double omega_lift = 0.0;
  KnotType knot;
  SpinAnomaly spin;
  int maslov = 0;
};

double curve_minimal_period(const ConfigClosedForms& forms);

/// A symmetric configuration with exact (closed-form) evaluation.
class SymmetricConfiguration {
 public:
  explicit SymmetricConfiguration(const IsoparametricSpec& spec);

  const ConfigClosedForms& forms() const { return forms_; }
  double curve_period() const { return curve_minimal_period(forms_); }

  /// d^k Gamma / ds^k.
  PseudoVector lift(double s, int deriv = 0) const;
  HeisenbergPoint point(double s) const;
  Eigen::Vector3d velocity(double s) const;

  /// Lift samples on [0, T), T the curve's minimal period, with the exact
  /// monodromy Gamma(T) / Gamma(0).
  SampledCurve sample_lift(std::size_t samples) const;
  SampledCurve sample_heisenberg(std::size_t samples) const;

 private:
  ConfigClosedForms forms_;
  std::array<double, 3> pattern_{};
  PseudoVector base_;  // U^{-1} S(rho)
};

struct ConfigurationBuild {
  ConfigClosedForms forms;
  SampledCurve lift;
  SampledCurve heisenberg;
};

ConfigurationBuild build_configuration(const IsoparametricSpec& spec, std::size_t samples);

}  // namespace cr3
