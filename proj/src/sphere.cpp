#include "cr3/sphere.hpp"

#include <cmath>
#include <numbers>

#include "cr3/chains.hpp"
#include "cr3/error.hpp"

namespace cr3 {

namespace {
const Complex I(0.0, 1.0);
}

SpherePoint SpherePoint::from_vector(const PseudoVector& v, double tol) {
  double n = v.norm();
  if (n == 0.0) fail(ErrorCode::NotNull, "zero vector");
  if (std::abs(herm_product(v, v)) > tol * n * n)
    fail(ErrorCode::NotNull, "vector is not lightlike");
  PseudoVector u = v / n;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(u(k)) > 1e-14) {
      u *= std::conj(u(k)) / std::abs(u(k));
      break;
    }
  }
  return SpherePoint(u);
}

bool SpherePoint::same_line(const SpherePoint& other, double tol) const {
  // Unit vectors on the same complex line satisfy |<a,b>_std| = 1.
  Complex c = rep_.dot(other.rep_);
  return std::abs(1.0 - std::abs(c)) <= tol;
}

PseudoVector chart_lift(const HeisenbergPoint& p) {
  PseudoVector v;
  v << 1.0, Complex(p.x, p.y), Complex(p.z, 0.5 * (p.x * p.x + p.y * p.y));
  return v;
}

SpherePoint heisenberg_chart(const HeisenbergPoint& p) {
  return SpherePoint::from_vector(chart_lift(p));
}

HeisenbergPoint heisenberg_projection(const PseudoVector& v) {
  if (std::abs(v(0)) <= 1e-12 * v.norm())
    fail(ErrorCode::PointAtInfinity, "first homogeneous coordinate vanishes");
  Complex w = v(1) / v(0), u = v(2) / v(0);
  return {w.real(), w.imag(), u.real()};
}

HeisenbergPoint heisenberg_projection(const SpherePoint& p) {
  return heisenberg_projection(p.representative());
}

double contact_form(const HeisenbergPoint& p, const Eigen::Vector3d& v) {
  return v(2) + p.x * v(1) - p.y * v(0);
}

PseudoMatrix heisenberg_section(const PseudoVector& v) {
  if (std::abs(v(0)) <= 1e-12 * v.norm())
    fail(ErrorCode::PointAtInfinity, "first homogeneous coordinate vanishes");
  Complex w = v(1) / v(0), u = v(2) / v(0);
  PseudoMatrix s;
  s << 1.0, 0.0, 0.0,
       w, 1.0, 0.0,
       u, I * std::conj(w), 1.0;
  return s;
}

PseudoMatrix torus_rotation(const CliffordAngles& a) {
  Complex e = std::exp(-I * (a.theta1 + 2.0 * a.theta2) / 6.0);
  Complex e2 = std::exp(I * (a.theta1 + 2.0 * a.theta2) / 3.0);
  double c = std::cos(a.theta1 / 2.0), s = std::sin(a.theta1 / 2.0);
  PseudoMatrix R;
  R << e * c, 0.0, e * s,
       0.0, e2, 0.0,
       -e * s, 0.0, e * c;
  return R;
}

double cyclide_parameter(const PseudoVector& v) {
  // |v2| / |v1 - i v3| is invariant under the torus and equals
  // rho / (1 + rho^2/2) on the slice S(rho).
  double den = std::abs(v(0) - I * v(2));
  if (den == 0.0) return std::numbers::sqrt2;
  double g = std::abs(v(1)) / den;
  if (g == 0.0) return 0.0;
  double disc = std::max(0.0, 1.0 - 2.0 * g * g);
  return (1.0 - std::sqrt(disc)) / g;
}

HeisenbergPoint cyclide_point(double rho, const CliffordAngles& a) {
  if (!(rho > 0.0 && rho < std::numbers::sqrt2))
    fail(ErrorCode::DomainError, "cyclide parameter must lie in (0, sqrt 2)");
  double r2 = rho * rho, r4 = r2 * r2;
  double ct = std::cos(a.theta1), st = std::sin(a.theta1);
  double den = 4.0 + r4 + (4.0 - r4) * ct;
  double x = 2.0 * rho * (2.0 + r2 + (2.0 - r2) * ct) / den;
  double y = -2.0 * rho * (r2 - 2.0) * st / den;
  double z = (r4 - 4.0) * st / den;
  double c2 = std::cos(a.theta2), s2 = std::sin(a.theta2);
  return {c2 * x - s2 * y, s2 * x + c2 * y, z};
}

SampledCurve chain_from_normal(const ChainSpec& spec, std::size_t samples) {
  const PseudoVector& S = spec.normal;
  double q = herm_product(S, S).real();
  if (causal_character(S) != CausalCharacter::Spacelike)
    fail(ErrorCode::NotSpacelike, "chain normal must be spacelike");
  if (std::abs(S(0)) <= 1e-12 * S.norm())
    fail(ErrorCode::ThroughInfinity, "chain passes through the point at infinity (vertical line)");
  if (samples < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  double R = std::sqrt(q) / std::abs(S(0));
  Complex w = S(1) / S(0), u = S(2) / S(0);
  const double T = 2.0 * std::numbers::pi;
  std::vector<double> s(samples);
  std::vector<HeisenbergPoint> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    double t = T * static_cast<double>(k) / static_cast<double>(samples);
    s[k] = t;
    pts[k] = {R * std::cos(t) + w.real(), R * std::sin(t) + w.imag(),
              R * (w.imag() * std::cos(t) - w.real() * std::sin(t)) + u.real()};
  }
  return SampledCurve::heisenberg(std::move(s), std::move(pts), true, T);
}

double chain_through_rate(const HeisenbergPoint& p, const Eigen::Vector3d& v) {
  double x1 = v(0), y1 = v(1), z1 = v(2);
  double den = 2.0 * (x1 * p.y - p.x * y1 - z1);
  if (std::abs(contact_form(p, v)) <= 1e-12 * std::max(1.0, v.norm()))
    fail(ErrorCode::LegendrianDirection, "direction lies in the contact plane");
  if (x1 * x1 + y1 * y1 == 0.0)
    fail(ErrorCode::DegenerateDirection, "vertical direction: the chain is a line through infinity");
  return (x1 * x1 + y1 * y1) / den;
}

SampledCurve chain_through(const HeisenbergPoint& p, const Eigen::Vector3d& v, std::size_t samples) {
  if (samples < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  double c1 = chain_through_rate(p, v);
  double x0 = p.x, y0 = p.y, z0 = p.z, x1 = v(0), y1 = v(1);
  double T = std::numbers::pi / std::abs(c1);
  std::vector<double> s(samples);
  std::vector<HeisenbergPoint> pts(samples);
  double A = (x0 * x1 + y0 * y1) / (2.0 * c1);
  double B = (x1 * x1 + 2.0 * c1 * (x0 * y1 - x1 * y0) + y1 * y1) / (4.0 * c1 * c1);
  for (std::size_t k = 0; k < samples; ++k) {
    double t = T * static_cast<double>(k) / static_cast<double>(samples);
    double c = std::cos(2.0 * c1 * t), sn = std::sin(2.0 * c1 * t);
    s[k] = t;
    pts[k] = {(y1 + 2.0 * c1 * x0 - y1 * c + x1 * sn) / (2.0 * c1),
              (-x1 + 2.0 * c1 * y0 + x1 * c + y1 * sn) / (2.0 * c1),
              // The height is affine in (x, y) along a chain; this fixes the
              // sign of the sine term so that the velocity at t = 0 is v.
              z0 + A - A * c - B * sn};
  }
  return SampledCurve::heisenberg(std::move(s), std::move(pts), true, T);
}

}  // namespace cr3
