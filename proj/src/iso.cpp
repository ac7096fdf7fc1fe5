#include "cr3/iso.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

#include "cr3/error.hpp"

namespace cr3 {

namespace {

const Complex I(0.0, 1.0);
const double kPi = std::numbers::pi;

long floor_mod(long a, long b) { return ((a % b) + b) % b; }

// 2 + 3r - 3r^2 - 2r^3, negative on (-2, -1/2).
double cubic_r(double r) { return 2.0 + 3.0 * r - 3.0 * r * r - 2.0 * r * r * r; }

}  // namespace

std::string RationalRatio::str() const {
  std::ostringstream os;
  os << m << "/" << n;
  return os.str();
}

RationalRatio make_ratio(long m, long n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "zero denominator");
  if (n < 0) {
    m = -m;
    n = -n;
  }
  long g = std::gcd(std::abs(m), n);
  if (g == 0) g = 1;
  return {m / g, n / g};
}

RationalRatio parse_ratio(const std::string& text) {
  auto parse_int = [&](const std::string& s) -> long {
    if (s.empty()) fail(ErrorCode::InvalidArgument, "malformed ratio '" + text + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) fail(ErrorCode::InvalidArgument, "malformed ratio '" + text + "'");
    for (std::size_t k = i; k < s.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k])))
        fail(ErrorCode::InvalidArgument,
             "ratio must be an exact fraction M/N, got '" + text + "'");
    return std::stol(s);
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return make_ratio(parse_int(text), 1);
  return make_ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

const char* to_string(ConfigKind k) { return k == ConfigKind::First ? "first" : "second"; }

const char* to_string(StringClass c) {
  switch (c) {
    case StringClass::First: return "first";
    case StringClass::Second: return "second";
    case StringClass::NotClosable: return "not-closable";
  }
  return "?";
}

double first_kind_rho2_bound(double r) {
  return 2.0 * (-3.0 + 2.0 * std::sqrt(2.0 - r - r * r)) / (1.0 + 2.0 * r);
}

void check_domain(const IsoparametricSpec& spec) {
  double r = spec.r.value();
  if (!(r > -2.0 && r < -0.5))
    fail(ErrorCode::DomainError, "spectral ratio r = " + spec.r.str() + " must lie in (-2, -1/2)");
  if (!(spec.rho > 0.0 && spec.rho < std::numbers::sqrt2))
    fail(ErrorCode::DomainError, "Clifford parameter rho must lie in (0, sqrt 2)");
  if (spec.kind == ConfigKind::First) {
    double b = first_kind_rho2_bound(r);
    if (!(spec.rho * spec.rho < b)) {
      std::ostringstream os;
      os << "first-kind configurations need rho^2 < 2(-3 + 2 sqrt(2 - r - r^2))/(1 + 2r) = " << b
         << " at r = " << spec.r.str();
      fail(ErrorCode::DomainError, os.str());
    }
  }
}

SpectralAnalysis analyze(double kappa, double tau) {
  SpectralAnalysis a;
  a.kappa = kappa;
  a.tau = tau;
  CubicRoots roots = solve_characteristic_cubic(kappa, tau);
  a.discriminant = roots.discriminant;
  if (roots.status != CubicStatus::Separated) {
    a.cls = StringClass::NotClosable;
    for (int j = 0; j < roots.count; ++j) a.e[j] = roots.e[j];
    return a;
  }
  a.e = roots.e;
  for (int j = 0; j < 3; ++j) {
    double e = a.e[j];
    a.V[j] << e * e - kappa * e - 2.0 * kappa * kappa, -1.0, -2.0 * I * kappa + I * e;
    a.phi[j] = 1.0 - 8.0 * kappa * kappa * kappa + 6.0 * kappa * e * e - 2.0 * e * e * e;
    a.causal[j] = a.phi[j] > 0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
  }
  a.ratio = a.e[0] / a.e[2];
  a.cls = 3.0 * kappa > std::sqrt(std::abs(tau)) ? StringClass::First : StringClass::Second;
  return a;
}

std::array<double, 3> exponent_pattern(ConfigKind kind, double r) {
  if (kind == ConfigKind::First) return {-(1.0 + r), 1.0, r};
  return {1.0, -(1.0 + r), r};
}

const PseudoMatrix& torus_basis() {
  static const PseudoMatrix U = [] {
    const double s = 1.0 / std::numbers::sqrt2;
    PseudoMatrix u;
    u << s, 0.0, I * s,
         0.0, 1.0, 0.0,
         I * s, 0.0, s;
    return u;
  }();
  return U;
}

PseudoVector slice_point(double rho) {
  PseudoVector v;
  v << 1.0, rho, I * rho * rho / 2.0;
  return v;
}

namespace reference {

double mu(ConfigKind kind, double r, double rho) {
  double r2 = rho * rho, r4 = r2 * r2;
  double a = kind == ConfigKind::First
                 ? 4.0 + 8.0 * r + 12.0 * r2 + (1.0 + 2.0 * r) * r4
                 : -4.0 + 4.0 * r - 12.0 * r2 * (1.0 + 2.0 * r) + (r - 1.0) * r4;
  double base = cubic_r(r) * (-4.0 * rho + rho * r4);
  return a / (a - 2.0 * std::pow(std::cbrt(base), 2));
}

double sigma(ConfigKind kind, double r, double rho) {
  double m = mu(kind, r, rho);
  double den = std::cbrt(rho * -cubic_r(r) * (4.0 - rho * rho * rho * rho));
  return 2.0 * (1.0 - m) / (m * den);
}

namespace {
double den23(double r, double rho) {
  double d = std::cbrt(cubic_r(r) * rho * (-4.0 + rho * rho * rho * rho));
  return d * d;
}
}  // namespace

double kappa(ConfigKind kind, double r, double rho) {
  double r2 = rho * rho;
  double num = kind == ConfigKind::First
                   ? -8.0 * r * r * r2 - std::pow(-2.0 + r2, 2) - 2.0 * r * std::pow(2.0 + r2, 2)
                   : 16.0 * r * r2 - std::pow(-2.0 + r2, 2) + r * r * std::pow(2.0 + r2, 2);
  return num / (4.0 * den23(r, rho));
}

namespace {
double tau_first(double r, double rho, double factor) {
  double r2 = rho * rho, r4 = r2 * r2;
  double a = 8.0 * r * r * r2 + std::pow(-2.0 + r2, 2) + 2.0 * r * std::pow(2.0 + r2, 2);
  double b = 4.0 + 12.0 * r2 + r4 + 2.0 * r * (4.0 + r4);
  double d = den23(r, rho);
  return (factor * a * a - 4.0 * (1.0 + r + r * r) * b * b) / (16.0 * d * d);
}
}  // namespace

double tau(ConfigKind kind, double r, double rho) {
  if (kind == ConfigKind::First) return tau_first(r, rho, 9.0);
  double r2 = rho * rho, r4 = r2 * r2;
  double n = 16.0 * r * r2 - std::pow(-2.0 + r2, 2) + r * r * std::pow(2.0 + r2, 2);
  double b = 4.0 + 12.0 * r2 + r4 - r * (4.0 - 12.0 * r2 + r4);
  double d = den23(r, rho);
  return (3.0 * n * n - 4.0 * (1.0 + r + r * r) * b * b) / (16.0 * d * d);
}

double tau_first_kind_corrected(double r, double rho) { return tau_first(r, rho, 3.0); }

}  // namespace reference

namespace {

struct OracleSystem {
  Complex d1;  // det at c = 1, sigma = 1
  double hh;   // Im <G0, G1> at c = 1, sigma = 1

  Eigen::Vector3d residual(double c, Complex s) const {
    Complex z = s * s * s * c * c * c * d1 + 1.0;
    return {z.real(), z.imag(), std::norm(s) * c * hh - 1.0};
  }
  Eigen::Matrix3d jacobian(double c, Complex s) const {
    Complex dc = 3.0 * s * s * s * c * c * d1;
    Complex ds = 3.0 * s * s * c * c * c * d1;
    Eigen::Matrix3d J;
    J << dc.real(), ds.real(), (I * ds).real(),
         dc.imag(), ds.imag(), (I * ds).imag(),
         std::norm(s) * hh, 2.0 * s.real() * c * hh, 2.0 * s.imag() * c * hh;
    return J;
  }
};

bool newton(const OracleSystem& sys, double& c, Complex& s, int& iters, double& res) {
  Eigen::Vector3d R = sys.residual(c, s);
  for (iters = 0; iters < 100; ++iters) {
    res = R.lpNorm<Eigen::Infinity>();
    if (res <= 1e-14) return true;
    Eigen::Vector3d dx = sys.jacobian(c, s).fullPivLu().solve(-R);
    if (!dx.allFinite()) return false;
    double lambda = 1.0;
    bool accepted = false;
    while (lambda > 1e-10) {
      double cn = c + lambda * dx(0);
      Complex sn = s + lambda * Complex(dx(1), dx(2));
      if (cn > 0.0) {
        Eigen::Vector3d Rn = sys.residual(cn, sn);
        if (Rn.lpNorm<Eigen::Infinity>() < res) {
          c = cn;
          s = sn;
          R = Rn;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      res = R.lpNorm<Eigen::Infinity>();
      return res <= 1e-12;
    }
  }
  res = R.lpNorm<Eigen::Infinity>();
  return res <= 1e-12;
}

}  // namespace

NormalizationResult normalization_oracle(const IsoparametricSpec& spec) {
  check_domain(spec);
  const double r = spec.r.value();
  auto pat = exponent_pattern(spec.kind, r);
  const PseudoMatrix& U = torus_basis();
  PseudoVector v = U.inverse() * slice_point(spec.rho);
  PseudoVector G[3];
  for (int d = 0; d < 3; ++d) {
    PseudoVector w;
    for (int j = 0; j < 3; ++j) w(j) = std::pow(-I * pat[j], d) * v(j);
    G[d] = U * w;
  }
  OracleSystem sys{det3(G[0], G[1], G[2]), herm_product(G[0], G[1]).imag()};
  if (!(sys.hh > 0.0))
    fail(ErrorCode::DomainError, "orbit is not positively transversal at these parameters");

  const Complex target = spec.kind == ConfigKind::First ? -1.0 : 1.0;
  NormalizationResult out;
  double mu0 = reference::mu(spec.kind, r, spec.rho);
  double sg0 = reference::sigma(spec.kind, r, spec.rho);
  double c = mu0 / (1.0 - mu0);
  Complex s = target * sg0;
  bool ok = false;
  if (std::isfinite(c) && c > 0.0 && std::isfinite(sg0)) {
    ok = newton(sys, c, s, out.iterations, out.residual);
    out.reference_seed = ok;
  }
  if (!ok) {
    c = 1.0;
    s = target;
    ok = newton(sys, c, s, out.iterations, out.residual);
  }
  if (!ok) {
    std::ostringstream os;
    os << "normalization did not converge (residual " << out.residual << ")";
    fail(ErrorCode::NoConvergence, os.str());
  }
  // Among the three cube-root-related solutions keep the one nearest the
  // sign of the closed-form scale.
  Complex best = s;
  for (int k = 1; k < 3; ++k) {
    Complex cand = s * std::polar(1.0, 2.0 * kPi * k / 3.0);
    if ((cand * std::conj(target)).real() > (best * std::conj(target)).real()) best = cand;
  }
  out.c = c;
  out.mu = c / (1.0 + c);
  out.sigma = best;
  out.residual = sys.residual(c, best).lpNorm<Eigen::Infinity>();
  return out;
}

std::string KnotType::str() const {
  std::ostringstream os;
  os << "(" << p << "," << q << ")";
  return os.str();
}

KnotType knot_type(ConfigKind kind, const RationalRatio& r) {
  long num = 2 * r.n + r.m;
  long den = kind == ConfigKind::First ? r.n + 2 * r.m : r.n - r.m;
  long g = std::gcd(std::abs(num), std::abs(den));
  if (g == 0) g = 1;
  return {num / g, den / g};
}

double SpinAnomaly::anomaly() const { return 2.0 * kPi * anomaly_thirds / 3.0; }

Complex SpinAnomaly::phase() const { return std::polar(1.0, anomaly()); }

std::string SpinAnomaly::spin_str() const { return spin_denominator == 3 ? "1/3" : "1"; }

std::string SpinAnomaly::anomaly_str() const {
  switch (anomaly_thirds) {
    case 1: return "2pi/3";
    case 2: return "4pi/3";
    default: return "0";
  }
}

SpinAnomaly spin_anomaly(const RationalRatio& r) {
  long m3 = floor_mod(r.m, 3), n3 = floor_mod(r.n, 3);
  if (m3 == 1 && n3 == 1) return {3, 2};
  if (m3 == 2 && n3 == 2) return {3, 1};
  return {1, 0};
}

int maslov_closed(ConfigKind kind, const RationalRatio& r) {
  if (kind == ConfigKind::First) return static_cast<int>(-(r.n + r.m));
  KnotType k = knot_type(kind, r);
  return static_cast<int>(k.p + k.q);
}

double curve_minimal_period(const ConfigClosedForms& forms) {
  return forms.omega_lift / forms.spin.spin_denominator;
}

SymmetricConfiguration::SymmetricConfiguration(const IsoparametricSpec& spec) {
  forms_.spec = spec;
  forms_.norm = normalization_oracle(spec);
  pattern_ = exponent_pattern(spec.kind, spec.r.value());
  base_ = torus_basis().inverse() * slice_point(spec.rho);
  PseudoVector g1 = lift(0.0, 1), g2 = lift(0.0, 2);
  forms_.kappa = 0.5 * herm_product(g1, g1).real();
  forms_.tau = herm_product(g2, g1).imag() + 3.0 * forms_.kappa * forms_.kappa;
  forms_.omega_lift = 2.0 * kPi * static_cast<double>(spec.r.n) / forms_.norm.c;
  forms_.knot = knot_type(spec.kind, spec.r);
  forms_.spin = spin_anomaly(spec.r);
  forms_.maslov = maslov_closed(spec.kind, spec.r);
}

PseudoVector SymmetricConfiguration::lift(double s, int deriv) const {
  const double c = forms_.norm.c;
  PseudoVector w;
  for (int j = 0; j < 3; ++j) {
    Complex lam = -I * c * pattern_[j];
    w(j) = std::pow(lam, deriv) * std::exp(lam * s) * base_(j);
  }
  return forms_.norm.sigma * (torus_basis() * w);
}

HeisenbergPoint SymmetricConfiguration::point(double s) const { return heisenberg_projection(lift(s)); }

Eigen::Vector3d SymmetricConfiguration::velocity(double s) const {
  PseudoVector g = lift(s), d = lift(s, 1);
  Complex w = (d(1) * g(0) - g(1) * d(0)) / (g(0) * g(0));
  Complex u = (d(2) * g(0) - g(2) * d(0)) / (g(0) * g(0));
  return {w.real(), w.imag(), u.real()};
}

SampledCurve SymmetricConfiguration::sample_lift(std::size_t samples) const {
  if (samples < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  const double T = curve_period();
  std::vector<double> s(samples);
  std::vector<PseudoVector> g(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    s[k] = T * static_cast<double>(k) / static_cast<double>(samples);
    g[k] = lift(s[k]);
  }
  // Exact return factor of the closed form over one curve period.
  PseudoVector a = lift(0.0), b = lift(T);
  std::size_t j = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(a(k)) > std::abs(a(j))) j = k;
  Complex m = b(j) / a(j);
  return SampledCurve::lift(std::move(s), std::move(g), true, T, m);
}

SampledCurve SymmetricConfiguration::sample_heisenberg(std::size_t samples) const {
  if (samples < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  const double T = curve_period();
  std::vector<double> s(samples);
  std::vector<HeisenbergPoint> p(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    s[k] = T * static_cast<double>(k) / static_cast<double>(samples);
    p[k] = point(s[k]);
  }
  return SampledCurve::heisenberg(std::move(s), std::move(p), true, T);
}

ConfigurationBuild build_configuration(const IsoparametricSpec& spec, std::size_t samples) {
  SymmetricConfiguration cfg(spec);
  return {cfg.forms(), cfg.sample_lift(samples), cfg.sample_heisenberg(samples)};
}

}  // namespace cr3
