#include "cr3/strain.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cr3/curves.hpp"
#include "cr3/error.hpp"

namespace cr3 {

double total_strain(const SampledCurve& closed) {
  if (!closed.periodic()) fail(ErrorCode::NotClosed, "total strain needs a closed curve");
  auto a = strain_density(closed);
  double sum = 0.0;
  for (double v : a) sum += v;
  return sum * closed.spacing();
}

double criticality_residual(double kappa, double tau) { return tau + 9.0 * kappa * kappa; }

double criticality_quartic(double r, double rho) {
  double x = rho * rho, x2 = x * x, x3 = x2 * x, x4 = x3 * x;
  return 16 - 96 * x - 40 * x2 - 24 * x3 + x4 - r * (16 + 96 * x - 40 * x2 + 24 * x3 + x4);
}

std::array<double, 4> printed_rho2_candidates(double r) {
  const double w = std::sqrt(3.0) * std::sqrt(1 + r + r * r);
  std::array<double, 4> f{};
  for (int j = 0; j < 4; ++j) {
    double s1 = j < 2 ? -1.0 : 1.0;  // sign of the square-root terms
    double s2 = j % 2 == 0 ? -1.0 : 1.0;  // sign of the fourth root
    double inner = 5 + 5 * r * r + s1 * 3 * w + r * (8 + s1 * 3 * w);
    f[j] = (6 + 6 * r + s1 * 4 * w + s2 * std::pow(inner, 0.25)) / (1 - r);
  }
  return f;
}

double printed_critical_rho2(double r) {
  double w = std::sqrt(3 * (1 + r + r * r));
  return (6 + 6 * r + 4 * w - std::pow(5 + 8 * r + 5 * r * r + 3 * (1 + r) * w, 0.25)) / (1 - r);
}

CriticalRho critical_rho(const RationalRatio& rr) {
  const double r = rr.value();
  if (!(r > -2.0 && r < -0.5))
    fail(ErrorCode::DomainError, "spectral ratio r = " + rr.str() + " must lie in (-2, -1/2)");
  auto g = [&](double rho) {
    return criticality_residual(reference::kappa(ConfigKind::Second, r, rho),
                                reference::tau(ConfigKind::Second, r, rho));
  };
  const double lo = 0.01, hi = std::sqrt(2.0) - 0.01;
  const int intervals = 200;
  std::vector<std::pair<double, double>> brackets;
  double a = lo, ga = g(a);
  for (int k = 1; k <= intervals; ++k) {
    double b = lo + (hi - lo) * k / intervals, gb = g(b);
    if (ga == 0.0 || (ga < 0) != (gb < 0)) brackets.emplace_back(a, b);
    a = b;
    ga = gb;
  }
  if (brackets.empty()) {
    std::ostringstream os;
    os << "no sign change of tau + 9 kappa^2 for rho in (" << lo << ", " << hi << "); profile:";
    for (int k = 0; k <= 10; ++k) {
      double x = lo + (hi - lo) * k / 10;
      os << " " << x << ":" << g(x);
    }
    fail(ErrorCode::NoRoot, os.str());
  }
  if (brackets.size() > 1) {
    std::ostringstream os;
    os << brackets.size() << " roots of tau + 9 kappa^2 for r = " << rr.str();
    fail(ErrorCode::MultipleRoots, os.str());
  }
  auto [x0, x1] = brackets.front();
  double g0 = g(x0);
  for (int it = 0; it < 200 && x1 - x0 > 1e-16; ++it) {
    double m = 0.5 * (x0 + x1), gm = g(m);
    if (gm == 0.0) {
      x0 = x1 = m;
      break;
    }
    if ((gm < 0) == (g0 < 0)) {
      x0 = m;
      g0 = gm;
    } else {
      x1 = m;
    }
  }
  CriticalRho out;
  out.rho = 0.5 * (x0 + x1);
  out.kappa = reference::kappa(ConfigKind::Second, r, out.rho);
  out.tau = reference::tau(ConfigKind::Second, r, out.rho);
  out.residual = criticality_residual(out.kappa, out.tau);

  out.printed_rho2 = printed_critical_rho2(r);
  out.f = printed_rho2_candidates(r);
  out.f3_in_claimed_range = out.f[2] > 6 - 4 * std::sqrt(2.0) && out.f[2] < 2;
  {
    double x = out.rho * out.rho;
    double scale = 0.0;
    const double c[5] = {16 - 16 * r, -96 - 96 * r, -40 + 40 * r, -24 - 24 * r, 1 - r};
    for (int k = 0; k < 5; ++k) scale = std::max(scale, std::abs(c[k] * std::pow(x, k)));
    out.quartic_at_root = criticality_quartic(r, out.rho) / scale;
    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 4; ++k) C(k, 3) = -c[k] / c[4];
    for (int k = 1; k < 4; ++k) C(k, k - 1) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix4d> es(C);
    for (int k = 0; k < 4; ++k) {
      auto z = es.eigenvalues()(k);
      if (std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z))) out.quartic_roots_rho2.push_back(z.real());
    }
    std::sort(out.quartic_roots_rho2.begin(), out.quartic_roots_rho2.end());
  }
  return out;
}

CriticalConfig critical_config(long p, long q) {
  if (p <= 0 || q <= 0 || p >= q || std::gcd(p, q) != 1)
    fail(ErrorCode::InvalidArgument, "need coprime p, q with 0 < p/q < 1");
  CriticalConfig out;
  out.p = p;
  out.q = q;
  out.r = make_ratio(p - 2 * q, p + q);
  out.root = critical_rho(out.r);
  SymmetricConfiguration cfg({ConfigKind::Second, out.r, out.root.rho});
  out.forms = cfg.forms();
  out.lift_residual = criticality_residual(out.forms.kappa, out.forms.tau);
  return out;
}

}  // namespace cr3
