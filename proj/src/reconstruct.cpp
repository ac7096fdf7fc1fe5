#include "cr3/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cr3/curves.hpp"
#include "cr3/error.hpp"

namespace cr3 {

namespace {

const Complex I(0.0, 1.0);

double max_abs(const PseudoMatrix& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

InvariantProfile InvariantProfile::constant(double kappa, double tau) {
  return {[kappa](double) { return kappa; }, [tau](double) { return tau; }};
}

InvariantProfile InvariantProfile::sampled(std::vector<double> s, std::vector<double> kappa,
                                           std::vector<double> tau) {
  if (s.size() < 2 || kappa.size() != s.size() || tau.size() != s.size())
    fail(ErrorCode::InvalidArgument, "profile table needs at least two rows of (s, kappa, tau)");
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!(s[k] > s[k - 1])) fail(ErrorCode::InvalidArgument, "profile parameters must increase");
  auto interp = [](std::vector<double> t, std::vector<double> v) {
    const std::size_t n = t.size();
    std::vector<double> m(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t a = k == 0 ? 0 : k - 1, b = k + 1 == n ? k : k + 1;
      m[k] = (v[b] - v[a]) / (t[b] - t[a]);
    }
    return [t = std::move(t), v = std::move(v), m = std::move(m)](double x) {
      if (x <= t.front()) return v.front();
      if (x >= t.back()) return v.back();
      std::size_t k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
      double h = t[k + 1] - t[k], u = (x - t[k]) / h, u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * v[k] + (u3 - 2 * u2 + u) * h * m[k] +
             (-2 * u3 + 3 * u2) * v[k + 1] + (u3 - u2) * h * m[k + 1];
    };
  };
  return {interp(s, std::move(kappa)), interp(s, std::move(tau))};
}

PseudoMatrix project_to_group(const PseudoMatrix& F) {
  const PseudoMatrix& h = form_matrix();
  PseudoMatrix A = F;
  for (int it = 0; it < 8; ++it) {
    PseudoMatrix X = h * A.adjoint() * h * A;
    double d = max_abs(X - PseudoMatrix::Identity());
    // Below the rounding level of X itself the correction only injects noise,
    // which the flow then amplifies on non-compact orbits.
    if (d < 64.0 * std::numeric_limits<double>::epsilon() * std::pow(max_abs(A), 2)) break;
    A = A * (3.0 * PseudoMatrix::Identity() - X) * 0.5;
  }
  // det is computed with cancellation of order eps |A|^3.
  Complex det = A.determinant();
  if (std::abs(det - 1.0) < 64.0 * std::numeric_limits<double>::epsilon() * std::pow(max_abs(A), 3))
    return A;
  return A / std::pow(det, 1.0 / 3.0);
}

Reconstruction reconstruct(const InvariantProfile& profile, const PseudoMatrix& F0, double s0,
                           double s1, double step, double step_tol) {
  if (!(step > 0.0) || !(s1 > s0)) fail(ErrorCode::InvalidArgument, "need step > 0 and s1 > s0");
  if (!is_group_element(F0, 1e-10))
    fail(ErrorCode::AlgebraViolation, "initial frame is not a group element");
  const std::size_t n = static_cast<std::size_t>(std::ceil((s1 - s0) / step - 1e-9));
  const double h = (s1 - s0) / static_cast<double>(n);

  auto K = [&](double s) { return wilczynski_generator(profile.kappa(s), profile.tau(s)); };
  auto rk4 = [&](const PseudoMatrix& F, double s, double dt) {
    PseudoMatrix Ka = K(s), Kb = K(s + 0.5 * dt), Kc = K(s + dt);
    PseudoMatrix k1 = F * Ka;
    PseudoMatrix k2 = (F + 0.5 * dt * k1) * Kb;
    PseudoMatrix k3 = (F + 0.5 * dt * k2) * Kb;
    PseudoMatrix k4 = (F + dt * k3) * Kc;
    return PseudoMatrix(F + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  Reconstruction out;
  out.params.resize(n + 1);
  out.frames.resize(n + 1);
  out.params[0] = s0;
  out.frames[0] = F0;
  out.max_group_defect = group_defect(F0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = s0 + h * static_cast<double>(k);
    const PseudoMatrix& F = out.frames[k];
    PseudoMatrix full = rk4(F, s, h);
    PseudoMatrix half = rk4(rk4(F, s, 0.5 * h), s + 0.5 * h, 0.5 * h);
    double err = max_abs(half - full) / 15.0 / std::max(1.0, max_abs(F));
    out.max_step_error = std::max(out.max_step_error, err);
    if (err > step_tol) {
      std::ostringstream os;
      os << "local error estimate " << err << " exceeds " << step_tol << " at s = " << s
         << "; reduce the step";
      fail(ErrorCode::StepRejected, os.str());
    }
    out.frames[k + 1] = project_to_group(half);
    out.params[k + 1] = k + 1 == n ? s1 : s + h;
    out.max_group_defect = std::max(out.max_group_defect, group_defect(out.frames[k + 1]));
  }
  return out;
}

SampledCurve Reconstruction::curve() const {
  std::vector<PseudoVector> g(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) g[k] = frames[k].col(0);
  return SampledCurve::lift(params, std::move(g), false, 0.0);
}

SampledCurve Reconstruction::closed_curve(double tol) const {
  const PseudoVector a = frames.front().col(0), b = frames.back().col(0);
  Eigen::Index j;
  a.cwiseAbs().maxCoeff(&j);
  Complex eps = b(j) / a(j);
  double defect = (b - eps * a).norm() / a.norm();
  if (defect > tol) {
    std::ostringstream os;
    os << "reconstructed curve does not close (defect " << defect << ")";
    fail(ErrorCode::NotClosed, os.str());
  }
  std::vector<double> s(params.begin(), params.end() - 1);
  std::vector<PseudoVector> g(frames.size() - 1);
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) g[k] = frames[k].col(0);
  return SampledCurve::lift(std::move(s), std::move(g), true, params.back() - params.front(), eps);
}

namespace {

PseudoMatrix frame_at(const LiftInterpolant& li, double s) {
  PseudoVector g0 = li.eval(s, 0), g1 = li.eval(s, 1), g2 = li.eval(s, 2);
  double kappa = 0.5 * herm_product(g1, g1).real();
  double tau = herm_product(g2, g1).imag() + 3.0 * kappa * kappa;
  double dkappa = herm_product(g2, g1).real();
  PseudoMatrix F;
  F.col(0) = g0;
  F.col(1) = g2 - 2.0 * I * kappa * g1 - (tau + kappa * kappa + I * dkappa) * g0;
  F.col(2) = g1 - I * kappa * g0;
  return F;
}

SampledCurve resample(const SampledCurve& c, std::size_t n) {
  LiftInterpolant li(c);
  std::vector<double> s(n);
  std::vector<PseudoVector> g(n);
  const double T = c.period(), s0 = c.params().front();
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = s0 + T * static_cast<double>(k) / static_cast<double>(n);
    g[k] = li.eval(s[k]);
  }
  return SampledCurve::lift(std::move(s), std::move(g), true, T, c.monodromy());
}

}  // namespace

Congruence congruence_test(const SampledCurve& a, const SampledCurve& b_in, double tol) {
  for (const SampledCurve* c : {&a, &b_in})
    if (c->model() != CurveModel::Lift || !c->periodic())
      fail(ErrorCode::NotClosed, "congruence needs closed lift-valued curves");
  Congruence out;
  const double T = a.period();
  if (std::abs(b_in.period() - T) > tol * std::max(1.0, T)) {
    out.profile_mismatch = std::numeric_limits<double>::infinity();
    return out;
  }
  SampledCurve b = b_in.size() == a.size() ? b_in : resample(b_in, a.size());
  WilczynskiData da = wilczynski_frame(a), db = wilczynski_frame(b);

  const std::size_t n = a.size();
  double scale = 1.0;
  for (std::size_t k = 0; k < n; ++k)
    scale = std::max({scale, std::abs(da.kappa[k]), std::abs(da.tau[k])});

  // Coarse alignment over sample shifts, then a continuous refinement.
  auto ssd_grid = [&](std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t m = (k + j) % n;
      acc += std::pow(da.kappa[m] - db.kappa[k], 2) + std::pow(da.tau[m] - db.tau[k], 2);
    }
    return acc;
  };
  std::size_t best = 0;
  double best_v = ssd_grid(0);
  for (std::size_t j = 1; j < n; ++j) {
    double v = ssd_grid(j);
    if (v < best_v) {
      best_v = v;
      best = j;
    }
  }
  std::vector<Complex> ka(da.kappa.begin(), da.kappa.end()), ta(da.tau.begin(), da.tau.end());
  TrigSeries sk(ka, T), st(ta, T);
  const double h = T / static_cast<double>(n);
  const double sa0 = a.params().front();
  auto mismatch = [&](double shift, bool max_norm) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double t = h * static_cast<double>(k) + shift;
      double dk = sk.eval(t).real() - db.kappa[k], dt = st.eval(t).real() - db.tau[k];
      acc = max_norm ? std::max(acc, std::abs(dk) + std::abs(dt)) : acc + dk * dk + dt * dt;
    }
    return acc;
  };
  double lo = (static_cast<double>(best) - 1.0) * h, hi = (static_cast<double>(best) + 1.0) * h;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = mismatch(x1, false), f2 = mismatch(x2, false);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = mismatch(x1, false);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = mismatch(x2, false);
    }
  }
  double shift = 0.5 * (lo + hi);
  if (mismatch(static_cast<double>(best) * h, false) <= mismatch(shift, false))
    shift = static_cast<double>(best) * h;
  shift = std::fmod(shift + T, T);
  // Profiles that align without a shift (constant ones align everywhere).
  if (mismatch(0.0, true) / scale <= tol) shift = 0.0;
  out.shift = shift;
  out.profile_mismatch = mismatch(shift, true) / scale;
  if (out.profile_mismatch > tol) return out;

  LiftInterpolant la(a);
  PseudoMatrix FA = frame_at(la, sa0 + shift);
  PseudoMatrix A = db.frames[0] * group_inverse(FA);

  double best_err = std::numeric_limits<double>::infinity();
  for (int e = 0; e < 3; ++e) {
    Complex eps = std::polar(1.0, 2.0 * std::numbers::pi * e / 3.0);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      PseudoVector ga = A * la.eval(sa0 + shift + h * static_cast<double>(k));
      const PseudoVector& gb = db.curve.lifts()[k];
      err = std::max(err, (ga - eps * gb).norm() / (max_abs(A) * gb.norm()));
    }
    if (err < best_err) {
      best_err = err;
      out.center = eps;
    }
  }
  out.curve_mismatch = best_err;
  out.transform = A;
  out.congruent = best_err <= tol;
  return out;
}

}  // namespace cr3
