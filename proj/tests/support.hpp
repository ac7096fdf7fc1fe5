#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cr3/core.hpp"
#include "cr3/iso.hpp"
#include "cr3/sampling.hpp"

namespace cr3::test {

inline constexpr double kPi = std::numbers::pi;

/// Random element of su(2,1): K = h A - tr/3 with A anti-Hermitian.
inline PseudoMatrix random_algebra(std::mt19937& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  PseudoMatrix X;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = Complex(g(rng), g(rng));
  PseudoMatrix A = (X - X.adjoint()) / 2.0;
  PseudoMatrix K = form_matrix() * A;
  K -= PseudoMatrix::Identity() * (K.trace() / 3.0);
  return K;
}

inline PseudoMatrix random_group(std::mt19937& rng, double scale) {
  return one_parameter_exp(random_algebra(rng, scale), 1.0);
}

inline SampledCurve transform(const PseudoMatrix& A, const SampledCurve& c) {
  SampledCurve lift = to_lift(c);
  std::vector<PseudoVector> v;
  for (const auto& z : lift.lifts()) v.push_back(A * z);
  return SampledCurve::lift(lift.params(), v, lift.periodic(), lift.period(), lift.monodromy());
}

inline SampledCurve scale_lift(const SampledCurve& c, Complex factor) {
  std::vector<PseudoVector> v;
  for (const auto& z : c.lifts()) v.push_back(factor * z);
  return SampledCurve::lift(c.params(), v, c.periodic(), c.period(), c.monodromy());
}

/// Uniform samples over one period of s -> Gamma(phi(s)) with
/// phi(s) = s + a T sin(2 pi s / T) / (2 pi), monotone for |a| < 1.
inline SampledCurve warped_lift(const SymmetricConfiguration& cfg, std::size_t n, double a) {
  const double T = cfg.curve_period();
  const SampledCurve base = cfg.sample_lift(8);
  std::vector<double> s(n);
  std::vector<PseudoVector> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = T * static_cast<double>(k) / static_cast<double>(n);
    v[k] = cfg.lift(s[k] + a * T * std::sin(2 * kPi * s[k] / T) / (2 * kPi));
  }
  return SampledCurve::lift(s, v, true, T, base.monodromy());
}

inline SampledCurve warped_heisenberg(const SymmetricConfiguration& cfg, std::size_t n, double a) {
  const double T = cfg.curve_period();
  std::vector<double> s(n);
  std::vector<HeisenbergPoint> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = T * static_cast<double>(k) / static_cast<double>(n);
    p[k] = cfg.point(s[k] + a * T * std::sin(2 * kPi * s[k] / T) / (2 * kPi));
  }
  return SampledCurve::heisenberg(s, p, true, T);
}

inline double max_deviation(const std::vector<double>& v, double target) {
  double e = 0.0;
  for (double x : v) e = std::max(e, std::abs(x - target));
  return e;
}

inline double max_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline std::vector<Eigen::Vector3d> positions(const SampledCurve& heisenberg) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& p : heisenberg.points()) out.push_back(p.vec());
  return out;
}

inline double hausdorff(const std::vector<Eigen::Vector3d>& a, const std::vector<Eigen::Vector3d>& b) {
  auto one_sided = [](const auto& x, const auto& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = INFINITY;
      for (const auto& q : y) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

/// Random (kind, r, rho) inside the closure domain, denominators up to 9.
inline IsoparametricSpec random_spec(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 1), den(1, 9);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  for (;;) {
    long n = den(rng);
    std::uniform_int_distribution<long> num(-2 * n + 1, -(n + 1) / 2);
    long m = num(rng);
    RationalRatio r = make_ratio(m, n);
    double v = r.value();
    if (!(v > -2.0 && v < -0.5)) continue;
    if (kind(rng) == 0) return {ConfigKind::Second, r, u(rng) * std::numbers::sqrt2};
    double b = std::min(first_kind_rho2_bound(v), 2.0);
    if (b <= 0.0) continue;
    return {ConfigKind::First, r, u(rng) * std::sqrt(b)};
  }
}

inline IsoparametricSpec second_34() { return {ConfigKind::Second, make_ratio(-5, 7), 0.7}; }
inline IsoparametricSpec first_74() { return {ConfigKind::First, make_ratio(-5, 6), 0.47343}; }

}  // namespace cr3::test
