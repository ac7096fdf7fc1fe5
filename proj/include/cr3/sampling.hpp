#pragma once

#include <cstddef>
#include <vector>

#include "cr3/core.hpp"
#include "cr3/sphere.hpp"

namespace cr3 {

enum class CurveModel { Heisenberg, Lift };
enum class DerivativeScheme { Spectral, FiniteDifference4 };

/// A curve sampled on a uniform parameter grid, either as Heisenberg points or
/// as lightlike lifts in C^{2,1}.
///
/// For a periodic curve the grid is s_k = k T / N, k < N, and the sample at T
/// is implicit. A periodic lift may return to a multiple of itself:
/// Gamma(s + T) = monodromy * Gamma(s).
class SampledCurve {
 public:
  SampledCurve() = default;

  static SampledCurve heisenberg(std::vector<double> params, std::vector<HeisenbergPoint> points,
                                 bool periodic, double period);
  static SampledCurve lift(std::vector<double> params, std::vector<PseudoVector> lifts,
                           bool periodic, double period, Complex monodromy = 1.0);

  CurveModel model() const { return model_; }
  std::size_t size() const { return params_.size(); }
  const std::vector<double>& params() const { return params_; }
  const std::vector<HeisenbergPoint>& points() const { return points_; }
  const std::vector<PseudoVector>& lifts() const { return lifts_; }
  bool periodic() const { return periodic_; }
  double period() const { return period_; }
  Complex monodromy() const { return monodromy_; }
  double spacing() const { return spacing_; }

  DerivativeScheme scheme() const { return scheme_; }
  void set_scheme(DerivativeScheme s) { scheme_ = s; }

 private:
  void validate(std::size_t n_values);

  CurveModel model_ = CurveModel::Heisenberg;
  std::vector<double> params_;
  std::vector<HeisenbergPoint> points_;
  std::vector<PseudoVector> lifts_;
  bool periodic_ = false;
  double period_ = 0.0;
  double spacing_ = 0.0;
  Complex monodromy_ = 1.0;
  DerivativeScheme scheme_ = DerivativeScheme::Spectral;
};

/// The chart lift of a Heisenberg curve (monodromy 1); lifts pass through.
SampledCurve to_lift(const SampledCurve& curve);

/// Heisenberg projection of a lift-valued curve.
SampledCurve to_heisenberg(const SampledCurve& curve);

/// d^k Gamma / ds^k at every sample for k = 0..order (order <= 4), indexed
/// [k][sample]. Spectral on periodic grids unless the curve asks for finite
/// differences; arcs always use fourth-order finite differences.
std::vector<std::vector<PseudoVector>> lift_derivatives(const SampledCurve& curve, int order);

/// Same for the Heisenberg coordinates of a Heisenberg-model curve.
std::vector<std::vector<Eigen::Vector3d>> point_derivatives(const SampledCurve& curve, int order);

/// d^order v / ds^order for uniformly sampled real data.
std::vector<double> scalar_derivative(const std::vector<double>& v, double spacing, bool periodic,
                                      DerivativeScheme scheme, int order = 1);

/// Trigonometric interpolant of uniformly sampled periodic complex data.
class TrigSeries {
 public:
  TrigSeries(const std::vector<Complex>& samples, double period);

  Complex eval(double t, int deriv = 0) const;
  /// Derivative values on the sample grid.
  std::vector<Complex> grid_derivative(int deriv) const;
  /// Mean value over one period.
  Complex mean() const;
  /// Antiderivative with zero value at t = 0, minus the linear growth
  /// mean() * t; periodic.
  Complex periodic_integral(double t) const;

  std::size_t size() const { return coef_.size(); }
  double period() const { return period_; }

 private:
  std::vector<Complex> coef_;  // FFT / N
  std::vector<double> freq_;   // angular frequencies; the Nyquist term is split
  double period_;
};

/// Interpolating evaluator for a lift-valued curve: trigonometric for periodic
/// curves (after removing the monodromy), cubic Hermite on arcs.
class LiftInterpolant {
 public:
  explicit LiftInterpolant(const SampledCurve& curve);
  /// Gamma^(deriv)(s), deriv <= 2.
  PseudoVector eval(double s, int deriv = 0) const;

 private:
  std::vector<double> t_;
  bool periodic_;
  double period_;
  Complex beta_;  // log(monodromy)/period
  std::vector<TrigSeries> series_;
  std::vector<std::vector<PseudoVector>> d_;  // arcs: value and derivative samples
};

}  // namespace cr3
