#include "cr3/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cr3/error.hpp"

namespace cr3 {

namespace {

const Complex I(0.0, 1.0);

double wrap_pi(double a) {
  const double tp = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, tp);
  if (a < 0) a += tp;
  return a - std::numbers::pi;
}

SampledCurve reversed(const SampledCurve& c) {
  const std::size_t n = c.size();
  const auto& L = c.lifts();
  std::vector<PseudoVector> r(n);
  std::vector<double> t(n);
  const double h = c.spacing();
  for (std::size_t k = 0; k < n; ++k) t[k] = c.params().front() + h * static_cast<double>(k);
  if (c.periodic()) {
    r[0] = L[0];
    for (std::size_t k = 1; k < n; ++k) r[k] = L[n - k] / c.monodromy();
    SampledCurve out = SampledCurve::lift(t, r, true, c.period(), 1.0 / c.monodromy());
    out.set_scheme(c.scheme());
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) r[k] = L[n - 1 - k];
  SampledCurve out = SampledCurve::lift(t, r, false, 0.0);
  out.set_scheme(c.scheme());
  return out;
}

std::vector<double> transversal_measure(const SampledCurve& lift,
                                        const std::vector<std::vector<PseudoVector>>& d) {
  std::vector<double> m(lift.size());
  for (std::size_t k = 0; k < lift.size(); ++k) {
    double scale = d[0][k].norm() * d[1][k].norm();
    m[k] = herm_product(d[0][k], d[1][k]).imag() / (scale > 0 ? scale : 1.0);
  }
  return m;
}

}  // namespace

bool transversality_check(const SampledCurve& curve, double tol) {
  SampledCurve l = to_lift(curve);
  auto d = lift_derivatives(l, 1);
  auto m = transversal_measure(l, d);
  double lo = *std::min_element(m.begin(), m.end());
  double hi = *std::max_element(m.begin(), m.end());
  return lo > tol || hi < -tol;
}

int orientation(const SampledCurve& curve, double tol) {
  SampledCurve l = to_lift(curve);
  auto d = lift_derivatives(l, 1);
  auto m = transversal_measure(l, d);
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (std::abs(m[k]) <= tol || (m[k] > 0) != (m[0] > 0)) {
      std::ostringstream os;
      os << "curve is tangent to the contact distribution near s = " << l.params()[k];
      fail(ErrorCode::NonTransversal, os.str());
    }
  }
  return m[0] > 0 ? 1 : -1;
}

std::vector<double> strain_density(const SampledCurve& curve, double tol) {
  SampledCurve l = to_lift(curve);
  orientation(l, tol);
  auto d = lift_derivatives(l, 2);
  std::vector<double> a(l.size());
  for (std::size_t k = 0; k < l.size(); ++k) {
    Complex det = det3(d[0][k], d[1][k], d[2][k]);
    Complex hp = herm_product(d[0][k], d[1][k]);
    a[k] = (I * std::pow(std::abs(det), 2.0 / 3.0) / hp).real();
  }
  return a;
}

std::vector<double> inflection_measure(const SampledCurve& curve) {
  SampledCurve l = to_lift(curve);
  auto d = lift_derivatives(l, 2);
  std::vector<double> m(l.size());
  for (std::size_t k = 0; k < l.size(); ++k) {
    double scale = d[0][k].norm() * d[1][k].norm() * d[2][k].norm();
    m[k] = std::abs(det3(d[0][k], d[1][k], d[2][k])) / (scale > 0 ? scale : 1.0);
  }
  return m;
}

std::vector<double> inflection_scan(const SampledCurve& curve, double tol_det) {
  auto m = inflection_measure(curve);
  std::vector<double> out;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (m[k] < tol_det) out.push_back(curve.params()[k]);
  return out;
}

WNormalized normalize_wilczynski(const SampledCurve& curve, double tol_det) {
  SampledCurve l = to_lift(curve);
  const std::size_t n = l.size();
  auto d = lift_derivatives(l, 2);
  std::vector<Complex> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex det = det3(d[0][k], d[1][k], d[2][k]);
    double scale = d[0][k].norm() * d[1][k].norm() * d[2][k].norm();
    if (std::abs(det) < tol_det * scale) {
      std::ostringstream os;
      os << "CR inflection point near s = " << l.params()[k];
      fail(ErrorCode::InflectionPresent, os.str());
    }
    g[k] = -1.0 / det;
  }
  // Continuous branch of arg g along the samples.
  std::vector<double> phi(n);
  phi[0] = std::arg(g[0]);
  for (std::size_t k = 1; k < n; ++k) phi[k] = phi[k - 1] + wrap_pi(std::arg(g[k]) - phi[k - 1]);

  std::vector<PseudoVector> w(n);
  std::vector<Complex> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    f[k] = std::polar(std::cbrt(std::abs(g[k])), phi[k] / 3.0);
    w[k] = f[k] * l.lifts()[k];
  }
  WNormalized out;
  if (l.periodic()) {
    const Complex m = l.monodromy();
    Complex gT = g[0] / (m * m * m);
    double phiT = phi[n - 1] + wrap_pi(std::arg(gT) - phi[n - 1]);
    Complex fT = std::polar(std::cbrt(std::abs(gT)), phiT / 3.0);
    Complex eps = fT * m / f[0];
    // Snap to the nearest cube root of unity.
    int j = static_cast<int>(std::lround(std::arg(eps) / (2.0 * std::numbers::pi / 3.0)));
    Complex root = std::polar(1.0, 2.0 * std::numbers::pi / 3.0 * j);
    if (std::abs(eps - root) > 1e-6)
      fail(ErrorCode::NotCubeRoot, "end mismatch of the Wilczynski lift is not a cube root of unity");
    out.end_mismatch = root;
    out.curve = SampledCurve::lift(l.params(), std::move(w), true, l.period(), root);
  } else {
    out.curve = SampledCurve::lift(l.params(), std::move(w), false, 0.0);
  }
  out.curve.set_scheme(l.scheme());
  return out;
}

SampledCurve natural_reparametrize(const SampledCurve& curve, std::size_t samples) {
  SampledCurve l = to_lift(curve);
  if (orientation(l) < 0) l = reversed(l);
  const std::size_t n = l.size();
  const std::size_t m = samples == 0 ? n : samples;
  if (m < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  std::vector<double> a = strain_density(l);
  const auto& t = l.params();
  const double t0 = t.front();
  const double h = l.spacing();

  // Accumulated strain S(u), u = t - t0, and its inverse on the target grid.
  std::vector<double> cum(n, 0.0);
  std::vector<double> targets(m);
  std::vector<double> tnew(m);
  if (l.periodic()) {
    std::vector<Complex> ac(a.begin(), a.end());
    TrigSeries ts(ac, l.period());
    const double mean = ts.mean().real();
    const double total = mean * l.period();
    auto S = [&](double u) { return mean * u + ts.periodic_integral(u).real(); };
    for (std::size_t k = 0; k < n; ++k) cum[k] = S(h * static_cast<double>(k));
    for (std::size_t j = 0; j < m; ++j) {
      double target = total * static_cast<double>(j) / static_cast<double>(m);
      targets[j] = target;
      std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
      k = std::max<std::size_t>(k, 1) - 1;
      double u = h * static_cast<double>(k) + (target - cum[k]) / a[k];
      for (int it = 0; it < 50; ++it) {
        double du = (S(u) - target) / ts.eval(u).real();
        u -= du;
        if (std::abs(du) <= 1e-15 * std::max(1.0, std::abs(u))) break;
      }
      tnew[j] = t0 + u;
    }
    LiftInterpolant li(l);
    std::vector<PseudoVector> g(m);
    for (std::size_t j = 0; j < m; ++j) g[j] = li.eval(tnew[j]);
    SampledCurve r = SampledCurve::lift(targets, std::move(g), true, total, l.monodromy());
    r.set_scheme(l.scheme());
    return normalize_wilczynski(r).curve;
  }

  // Arc: Hermite-corrected trapezoid for S, Hermite inversion.
  std::vector<double> ap = scalar_derivative(a, h, false, DerivativeScheme::FiniteDifference4);
  for (std::size_t k = 1; k < n; ++k)
    cum[k] = cum[k - 1] + h * (a[k - 1] + a[k]) / 2.0 + h * h * (ap[k - 1] - ap[k]) / 12.0;
  const double total = cum.back();
  // An arc that is already natural keeps its samples; interpolation would only
  // cost accuracy in the second derivative.
  double worst = 0.0;
  for (double x : a) worst = std::max(worst, std::abs(x - 1.0));
  if (m == n && worst <= 1e-8) {
    for (std::size_t k = 0; k < n; ++k) targets[k] = t[k] - t0;
    SampledCurve r = SampledCurve::lift(targets, l.lifts(), false, 0.0);
    r.set_scheme(l.scheme());
    // Same for a lift already normalized: rescaling by cbrt(-1/det) would feed
    // the derivative error back into the samples.
    auto d = lift_derivatives(r, 2);
    bool unit = true;
    for (std::size_t k = 0; k < n && unit; ++k)
      unit = std::abs(det3(d[0][k], d[1][k], d[2][k]) + 1.0) <= 1e-8 * d[0][k].norm() * d[1][k].norm() * d[2][k].norm();
    return unit ? r : normalize_wilczynski(r).curve;
  }
  auto hermite = [&](std::size_t k, double x) {
    double x2 = x * x, x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * cum[k] + (x3 - 2 * x2 + x) * h * a[k] +
           (-2 * x3 + 3 * x2) * cum[k + 1] + (x3 - x2) * h * a[k + 1];
  };
  for (std::size_t j = 0; j < m; ++j) {
    double target = total * static_cast<double>(j) / static_cast<double>(m - 1);
    targets[j] = target;
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
    k = std::min(std::max<std::size_t>(k, 1) - 1, n - 2);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      (hermite(k, mid) < target ? lo : hi) = mid;
    }
    tnew[j] = std::min(t[k] + h * 0.5 * (lo + hi), t.back());
  }
  LiftInterpolant li(l);
  std::vector<PseudoVector> g(m);
  for (std::size_t j = 0; j < m; ++j) g[j] = li.eval(tnew[j]);
  SampledCurve r = SampledCurve::lift(targets, std::move(g), false, 0.0);
  r.set_scheme(l.scheme());
  return normalize_wilczynski(r).curve;
}

BendingTwist bending_twist(const SampledCurve& natural, double tol) {
  if (natural.model() != CurveModel::Lift)
    fail(ErrorCode::NotNatural, "a natural Wilczynski lift is required");
  auto d = lift_derivatives(natural, 2);
  BendingTwist bt;
  const std::size_t n = natural.size();
  bt.kappa.resize(n);
  bt.tau.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex hp = herm_product(d[0][k], d[1][k]);
    Complex det = det3(d[0][k], d[1][k], d[2][k]);
    // Relative to the size of the terms that cancel in each identity.
    double s0 = d[0][k].norm(), s1 = d[1][k].norm(), s2 = d[2][k].norm();
    if (std::abs(hp - I) > tol * std::max(1.0, s0 * s1) ||
        std::abs(det + 1.0) > tol * std::max(1.0, s0 * s1 * s2)) {
      std::ostringstream os;
      os << "lift is not a natural Wilczynski lift near s = " << natural.params()[k]
         << " (|<W,W'> - i| = " << std::abs(hp - I) << ", |det + 1| = " << std::abs(det + 1.0) << ")";
      fail(ErrorCode::NotNatural, os.str());
    }
    double kappa = 0.5 * herm_product(d[1][k], d[1][k]).real();
    bt.kappa[k] = kappa;
    bt.tau[k] = herm_product(d[2][k], d[1][k]).imag() + 3.0 * kappa * kappa;
  }
  return bt;
}

WilczynskiData wilczynski_frame(const SampledCurve& natural, double tol) {
  BendingTwist bt = bending_twist(natural, tol);
  auto d = lift_derivatives(natural, 2);
  WilczynskiData w;
  w.curve = natural;
  w.kappa = bt.kappa;
  w.tau = bt.tau;
  w.kappa_prime = scalar_derivative(bt.kappa, natural.spacing(), natural.periodic(), natural.scheme());
  w.end_mismatch = natural.periodic() ? natural.monodromy() : Complex(1.0);
  const std::size_t n = natural.size();
  w.frames.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double kp = w.kappa[k];
    PseudoMatrix F;
    F.col(0) = d[0][k];
    F.col(1) = d[2][k] - 2.0 * I * kp * d[1][k] - (w.tau[k] + kp * kp + I * w.kappa_prime[k]) * d[0][k];
    F.col(2) = d[1][k] - I * kp * d[0][k];
    w.frames[k] = F;
  }
  return w;
}

WilczynskiData analyze_curve(const SampledCurve& curve, std::size_t samples) {
  SampledCurve l = to_lift(curve);
  int o = orientation(l);
  auto infl = inflection_scan(l);
  if (!infl.empty()) {
    std::ostringstream os;
    os << infl.size() << " CR inflection sample(s), first near s = " << infl.front();
    fail(ErrorCode::InflectionPresent, os.str());
  }
  SampledCurve nat = natural_reparametrize(l, samples);
  WilczynskiData w = wilczynski_frame(nat);
  w.orientation = o;
  return w;
}

ChainSpec osculating_chain(const SampledCurve& curve, double s) {
  SampledCurve l = to_lift(curve);
  LiftInterpolant li(l);
  return {h_orthogonal_complement(li.eval(s, 0), li.eval(s, 1))};
}

Trihedron cr_trihedron(const WilczynskiData& data, std::size_t index) {
  if (index >= data.frames.size()) fail(ErrorCode::InvalidArgument, "sample index out of range");
  const PseudoMatrix& F = data.frames[index];
  const PseudoVector G = F.col(0);
  Trihedron tr;
  tr.point = heisenberg_projection(G);
  // Y lies in the stabilizer of the base point; its Levi part rotates and
  // rescales the standard frame of the Heisenberg contact structure.
  PseudoMatrix Y = F.inverse() * heisenberg_section(G);
  double rho = std::abs(Y(0, 0));
  double th = std::arg(Y(0, 0));
  Complex w = Y(1, 2) * std::exp(-I * th);
  double c3 = std::cos(3.0 * th), s3 = std::sin(3.0 * th);
  Eigen::Matrix3d M;
  M << 1.0 / (rho * rho), 0.0, 0.0,
       w.real() / rho, c3 / rho, s3 / rho,
       w.imag() / rho, -s3 / rho, c3 / rho;
  const double x = tr.point.x, y = tr.point.y;
  Eigen::Matrix3d SH;
  SH << 0.0, 1.0, 0.0,
        0.0, 0.0, 1.0,
        1.0, y, -x;
  Eigen::Matrix3d frame = SH * M.inverse();
  tr.T = frame.col(0);
  tr.N = frame.col(1);
  tr.JN = frame.col(2);
  return tr;
}

}  // namespace cr3
