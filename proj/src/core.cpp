#include "cr3/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "cr3/error.hpp"

namespace cr3 {

namespace {

const Complex I(0.0, 1.0);

double max_abs(const PseudoMatrix& M) { return M.cwiseAbs().maxCoeff(); }

double cubic_value(double a, double b, double t) { return -t * t * t + a * t + b; }

// Two Newton steps on P(t) = -t^3 + a t + b.
double polish(double a, double b, double t) {
  for (int it = 0; it < 3; ++it) {
    double d = -3.0 * t * t + a;
    if (d == 0.0) break;
    double step = cubic_value(a, b, t) / d;
    t -= step;
    if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

// Closed trigonometric form of the three eigenvalues, ascending, valid for
// a > 0, b != 0 and 4a^3 - 27b^2 > 0.
std::array<double, 3> trig_roots(double a, double b) {
  const double pi = std::numbers::pi;
  double sb = b > 0 ? 1.0 : -1.0;
  double A = std::sqrt(12.0 * a * a * a - 81.0 * b * b) / (9.0 * b);
  double R = 2.0 * std::sqrt(a / 3.0);
  double l1 = -R * std::cos(std::atan(-A) / 3.0 + pi / 6.0 * (1.0 + sb));
  double l2 = -R * std::cos(std::atan(-A) / 3.0 - pi / 6.0 * (3.0 - sb));
  double l3 = R * std::cos(std::atan(A) / 3.0 - pi / 6.0 * (1.0 + sb)) -
              R * std::sin(std::atan(A) / 3.0 - pi / 6.0 * sb);
  return {l1, l2, l3};
}

// Viete form for t^3 - a t - b = 0 with three real roots.
std::array<double, 3> viete_roots(double a, double b) {
  const double pi = std::numbers::pi;
  double R = 2.0 * std::sqrt(a / 3.0);
  double arg = std::clamp(1.5 * b / a * std::sqrt(3.0 / a), -1.0, 1.0);
  double phi = std::acos(arg) / 3.0;
  std::array<double, 3> t{R * std::cos(phi), R * std::cos(phi - 2.0 * pi / 3.0),
                          R * std::cos(phi - 4.0 * pi / 3.0)};
  std::sort(t.begin(), t.end());
  return t;
}

PseudoMatrix pade6_exp(const PseudoMatrix& A) {
  // Coefficients of the diagonal (6,6) Pade approximant.
  static const double c[7] = {1.0,
                              1.0 / 2.0,
                              5.0 / 44.0,
                              1.0 / 66.0,
                              1.0 / 792.0,
                              1.0 / 15840.0,
                              1.0 / 665280.0};
  double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int j = 0;
  if (norm > 0.5) j = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.5))));
  PseudoMatrix X = A / std::ldexp(1.0, j);
  PseudoMatrix N = PseudoMatrix::Identity() * c[0];
  PseudoMatrix D = PseudoMatrix::Identity() * c[0];
  PseudoMatrix P = PseudoMatrix::Identity();
  double sign = 1.0;
  for (int k = 1; k <= 6; ++k) {
    P = P * X;
    sign = -sign;
    N += c[k] * P;
    D += sign * c[k] * P;
  }
  PseudoMatrix E = D.partialPivLu().solve(N);
  for (int k = 0; k < j; ++k) E = E * E;
  return E;
}

}  // namespace

const PseudoMatrix& form_matrix() {
  static const PseudoMatrix h = [] {
    PseudoMatrix m = PseudoMatrix::Zero();
    m(0, 2) = I;
    m(1, 1) = 1.0;
    m(2, 0) = -I;
    return m;
  }();
  return h;
}

Complex herm_product(const PseudoVector& z, const PseudoVector& w) {
  return z.adjoint() * form_matrix() * w;
}

double group_defect(const PseudoMatrix& F) {
  const PseudoMatrix& h = form_matrix();
  double d = max_abs(F.adjoint() * h * F - h);
  return std::max(d, std::abs(F.determinant() - 1.0));
}

bool is_group_element(const PseudoMatrix& F, double tol) { return group_defect(F) <= tol; }

double algebra_defect(const PseudoMatrix& K) {
  const PseudoMatrix& h = form_matrix();
  return std::max(max_abs(K.adjoint() * h + h * K), std::abs(K.trace()));
}

bool is_algebra_element(const PseudoMatrix& K, double tol) { return algebra_defect(K) <= tol; }

PseudoMatrix group_inverse(const PseudoMatrix& F) {
  const PseudoMatrix& h = form_matrix();
  return h * F.adjoint() * h;
}

CausalCharacter causal_character(const PseudoVector& v, double tol) {
  double q = herm_product(v, v).real();
  double scale = v.squaredNorm();
  if (std::abs(q) <= tol * scale) return CausalCharacter::Lightlike;
  return q > 0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

const char* to_string(CausalCharacter c) {
  switch (c) {
    case CausalCharacter::Spacelike: return "spacelike";
    case CausalCharacter::Timelike: return "timelike";
    case CausalCharacter::Lightlike: return "lightlike";
  }
  return "?";
}

PseudoMatrix wilczynski_generator(double kappa, double tau) {
  PseudoMatrix K;
  K << I * kappa, -I, tau,
       0.0, -2.0 * I * kappa, 1.0,
       1.0, 0.0, I * kappa;
  return K;
}

double characteristic_discriminant(double k, double t) {
  return -27.0 + 108.0 * k * (k * k + t) - 324.0 * std::pow(k, 4) * t - 72.0 * k * k * t * t -
         4.0 * t * t * t;
}

CubicRoots solve_characteristic_cubic(double kappa, double tau) {
  CubicRoots out;
  double a = 3.0 * kappa * kappa - tau;
  double b = 2.0 * kappa * kappa * kappa + 2.0 * kappa * tau - 1.0;
  out.discriminant = characteristic_discriminant(kappa, tau);

  if (out.discriminant > 0.0 && a > 0.0) {
    out.status = CubicStatus::Separated;
    out.count = 3;
    double guard = 1.0 - 2.0 * kappa * kappa - 2.0 * kappa * tau;
    if (std::abs(b) > 1e-12 && std::abs(guard) > 1e-12) {
      out.branch = CubicBranch::Trigonometric;
      out.e = trig_roots(a, b);
    } else {
      out.branch = CubicBranch::Fallback;
      out.e = viete_roots(a, b);
    }
    for (auto& e : out.e) e = polish(a, b, e);
    std::sort(out.e.begin(), out.e.end());
    return out;
  }

  // One real root (or a repeated one): Cardano on t^3 + p t + q with
  // p = -a, q = -b.
  out.status = CubicStatus::NonSeparated;
  out.branch = CubicBranch::Fallback;
  double p = -a, q = -b;
  double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc >= 0.0) {
    double sq = std::sqrt(disc);
    double t = std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq);
    out.e[0] = polish(a, b, t);
    out.count = 1;
    if (disc == 0.0 && p != 0.0) {
      // Repeated root -3q/(2p) alongside the simple root 3q/p.
      double simple = 3.0 * q / p, dbl = -1.5 * q / p;
      out.e = {std::min(simple, dbl), std::max(simple, dbl), 0.0};
      out.count = 2;
    }
  } else {
    out.e = viete_roots(a, b);
    for (auto& e : out.e) e = polish(a, b, e);
    out.count = 3;
  }
  return out;
}

PseudoMatrix one_parameter_exp(const PseudoMatrix& K, double s) {
  double scale = std::max(1.0, max_abs(K));
  if (algebra_defect(K) > 1e-8 * scale)
    fail(ErrorCode::AlgebraViolation, "generator is not in su(2,1)");

  Eigen::ComplexEigenSolver<PseudoMatrix> es(K);
  if (es.info() == Eigen::Success) {
    const auto& ev = es.eigenvalues();
    double sep = std::min({std::abs(ev(0) - ev(1)), std::abs(ev(0) - ev(2)),
                           std::abs(ev(1) - ev(2))});
    if (sep > 1e-6) {
      const PseudoMatrix& V = es.eigenvectors();
      Eigen::Vector3cd d;
      for (int j = 0; j < 3; ++j) d(j) = std::exp(s * ev(j));
      return V * d.asDiagonal() * V.inverse();
    }
  }
  return pade6_exp(s * K);
}

Complex det3(const PseudoVector& a, const PseudoVector& b, const PseudoVector& c) {
  return a(0) * (b(1) * c(2) - b(2) * c(1)) - a(1) * (b(0) * c(2) - b(2) * c(0)) +
         a(2) * (b(0) * c(1) - b(1) * c(0));
}

PseudoVector h_orthogonal_complement(const PseudoVector& u, const PseudoVector& v) {
  const PseudoMatrix& h = form_matrix();
  PseudoVector a = h * u, b = h * v;
  // <S,u> = sum conj(S_i) a_i, so conj(S) must be the bilinear cross product
  // of a and b. Eigen's complex cross product already returns its conjugate.
  PseudoVector S = a.cross(b);
  if (S.norm() <= 1e-12 * a.norm() * b.norm())
    fail(ErrorCode::DegenerateSpan, "vectors span less than a plane");
  return S;
}

}  // namespace cr3
