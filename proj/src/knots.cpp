#include "cr3/knots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/FFT>

#include "cr3/error.hpp"

namespace cr3 {

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double a) { return std::remainder(a, kTwoPi); }

// Order of a cube root of unity.
int root_order(Complex eps) { return std::abs(eps - 1.0) < 1e-3 ? 1 : 3; }

Monodromy classify(Complex eps, double spread, double tol) {
  if (std::abs(eps * eps * eps - 1.0) > tol) {
    std::ostringstream os;
    os << "lift monodromy " << eps << " is not a cube root of unity";
    fail(ErrorCode::NotCubeRoot, os.str());
  }
  Monodromy m;
  m.spread = spread;
  double a = std::arg(eps);
  if (a < 0) a += kTwoPi;
  int thirds = static_cast<int>(std::lround(a / (kTwoPi / 3.0))) % 3;
  m.anomaly_thirds = thirds;
  m.epsilon = std::polar(1.0, kTwoPi * thirds / 3.0);
  m.anomaly = kTwoPi * thirds / 3.0;
  m.spin_denominator = thirds == 0 ? 1 : 3;
  return m;
}

std::vector<Eigen::Vector3d> positions(const SampledCurve& c) {
  SampledCurve h = c.model() == CurveModel::Heisenberg ? c : to_heisenberg(c);
  std::vector<Eigen::Vector3d> p(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) p[k] = h.points()[k].vec();
  return p;
}

SampledCurve closed_heisenberg(const SampledCurve& c) {
  if (!c.periodic()) fail(ErrorCode::NotClosed, "a closed curve is required");
  return c.model() == CurveModel::Heisenberg ? c : to_heisenberg(c);
}

// Arc-length grid of n points on a closed Heisenberg curve: positions, unit
// tangents and total length.
struct ArcGrid {
  std::vector<Eigen::Vector3d> p;
  std::vector<Eigen::Vector3d> t;
  double length = 0.0;
};

// Values of the trigonometric interpolant of uniform samples (and its
// derivative of the given order) on a finer uniform grid of size M.
std::vector<Complex> upsample(const std::vector<Complex>& samples, std::size_t M, double period,
                              int deriv) {
  Eigen::FFT<double> fft;
  const std::size_t m = samples.size();
  std::vector<Complex> c;
  fft.fwd(c, samples);
  std::vector<Complex> F(M, 0.0);
  const double w0 = kTwoPi / period;
  auto factor = [&](long k) {
    Complex f = 1.0;
    for (int d = 0; d < deriv; ++d) f *= Complex(0.0, w0 * static_cast<double>(k));
    return f;
  };
  const double scale = static_cast<double>(M) / static_cast<double>(m);
  for (std::size_t j = 0; j < m; ++j) {
    long k = static_cast<long>(j);
    if (2 * j > m) k -= static_cast<long>(m);
    if (m % 2 == 0 && 2 * j == m) {
      // Split the Nyquist term evenly between +k and -k.
      F[static_cast<std::size_t>(k)] += 0.5 * scale * c[j] * factor(k);
      F[M - static_cast<std::size_t>(k)] += 0.5 * scale * c[j] * factor(-k);
      continue;
    }
    std::size_t idx = k >= 0 ? static_cast<std::size_t>(k) : M - static_cast<std::size_t>(-k);
    F[idx] += scale * c[j] * factor(k);
  }
  std::vector<Complex> out;
  fft.inv(out, F);
  return out;
}

ArcGrid arc_grid(const SampledCurve& curve, std::size_t n) {
  SampledCurve c = closed_heisenberg(curve);
  const std::size_t m = c.size();
  const double T = c.period();
  std::size_t M = 1;
  while (M < 8 * std::max(m, n)) M *= 2;
  const double hf = T / static_cast<double>(M);

  std::vector<Complex> comp[3];
  for (auto& v : comp) v.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    comp[0][k] = c.points()[k].x;
    comp[1][k] = c.points()[k].y;
    comp[2][k] = c.points()[k].z;
  }
  // Fine grid values and first two derivatives of each coordinate.
  std::vector<Eigen::Vector3d> P[3];
  for (int d = 0; d < 3; ++d) P[d].assign(M, Eigen::Vector3d::Zero());
  for (int a = 0; a < 3; ++a)
    for (int d = 0; d < 3; ++d) {
      auto v = upsample(comp[a], M, T, d);
      for (std::size_t j = 0; j < M; ++j) P[d][j](a) = v[j].real();
    }
  // Cumulative arc length by spectral integration of the speed.
  std::vector<Complex> speed(M);
  for (std::size_t j = 0; j < M; ++j) speed[j] = P[1][j].norm();
  Eigen::FFT<double> fft;
  std::vector<Complex> sc;
  fft.fwd(sc, speed);
  const double mean = sc[0].real() / static_cast<double>(M);
  std::vector<Complex> F(M, 0.0);
  Complex offset = 0.0;
  const double w0 = kTwoPi / T;
  for (std::size_t j = 1; j < M; ++j) {
    if (2 * j == M) continue;
    long k = static_cast<long>(j);
    if (2 * j > M) k -= static_cast<long>(M);
    Complex v = sc[j] / Complex(0.0, w0 * static_cast<double>(k));
    F[j] = v;
    offset += v / static_cast<double>(M);
  }
  std::vector<Complex> osc;
  fft.inv(osc, F);
  std::vector<double> S(M + 1), sp(M + 1);
  for (std::size_t j = 0; j < M; ++j) {
    S[j] = mean * hf * static_cast<double>(j) + (osc[j] - offset).real();
    sp[j] = speed[j].real();
  }
  ArcGrid g;
  g.length = mean * T;
  S[M] = g.length;
  sp[M] = sp[0];

  g.p.resize(n);
  g.t.resize(n);
  std::size_t cell = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double target = g.length * static_cast<double>(i) / static_cast<double>(n);
    while (cell + 1 < M && S[cell + 1] <= target) ++cell;
    // Invert the cubic Hermite model of S on the cell.
    const double s0 = S[cell], s1 = S[cell + 1], d0 = sp[cell] * hf, d1 = sp[cell + 1] * hf;
    auto Sh = [&](double u) {
      double u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * s0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * s1 +
             (u3 - u2) * d1;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (Sh(mid) < target ? lo : hi) = mid;
    }
    const double u = 0.5 * (lo + hi), u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const std::size_t a = cell, b = (cell + 1) % M;
    // Quintic Hermite from values and two derivatives at the cell ends.
    const double H0 = 1 - 10 * u3 + 15 * u4 - 6 * u5, H1 = u - 6 * u3 + 8 * u4 - 3 * u5,
                 H2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5, H3 = 0.5 * u3 - u4 + 0.5 * u5,
                 H4 = -4 * u3 + 7 * u4 - 3 * u5, H5 = 10 * u3 - 15 * u4 + 6 * u5;
    const double D0 = -30 * u2 + 60 * u3 - 30 * u4, D1 = 1 - 18 * u2 + 32 * u3 - 15 * u4,
                 D2 = u - 4.5 * u2 + 6 * u3 - 2.5 * u4, D3 = 1.5 * u2 - 4 * u3 + 2.5 * u4,
                 D4 = -12 * u2 + 28 * u3 - 15 * u4, D5 = 30 * u2 - 60 * u3 + 30 * u4;
    g.p[i] = H0 * P[0][a] + H1 * hf * P[1][a] + H2 * hf * hf * P[2][a] + H3 * hf * hf * P[2][b] +
             H4 * hf * P[1][b] + H5 * P[0][b];
    Eigen::Vector3d v = D0 * P[0][a] + D1 * hf * P[1][a] + D2 * hf * hf * P[2][a] +
                        D3 * hf * hf * P[2][b] + D4 * hf * P[1][b] + D5 * P[0][b];
    g.t[i] = v.normalized();
  }
  return g;
}

// Neumaier-compensated running sum.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double min_distance_between(const std::vector<Eigen::Vector3d>& a,
                            const std::vector<Eigen::Vector3d>& b) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : a)
    for (const auto& q : b) d = std::min(d, (p - q).squaredNorm());
  return std::sqrt(d);
}

void check_pushoff(const std::vector<Eigen::Vector3d>& base, const std::vector<Eigen::Vector3d>& push,
                   double epsilon) {
  double d = min_distance_between(base, push);
  if (d < 0.1 * epsilon) {
    std::ostringstream os;
    os << "push-off comes within " << d << " of the curve (epsilon " << epsilon << ")";
    fail(ErrorCode::SelfIntersecting, os.str());
  }
}

}  // namespace

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CR3_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

MaslovResult maslov_numeric(const SampledCurve& closed, double chi_tol) {
  if (!closed.periodic()) fail(ErrorCode::NotClosed, "Maslov index needs a closed curve");
  WNormalized w = normalize_wilczynski(closed);
  const auto& L = w.curve.lifts();
  const std::size_t n = L.size();
  std::vector<Complex> chi(n);
  double cmax = 0.0, cmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    chi[k] = L[k](0) - Complex(0.0, 1.0) * L[k](2);
    cmax = std::max(cmax, std::abs(chi[k]));
    cmin = std::min(cmin, std::abs(chi[k]));
  }
  MaslovResult r;
  r.min_chi = cmin / cmax;
  if (r.min_chi < chi_tol) fail(ErrorCode::ChiVanishes, "chi = W1 - i W3 vanishes along the curve");
  double phase = 0.0;
  for (std::size_t k = 1; k < n; ++k) phase += wrap_pi(std::arg(chi[k] / chi[k - 1]));
  phase += wrap_pi(std::arg(w.end_mismatch * chi[0] / chi[n - 1]));
  r.lift_periods = root_order(w.end_mismatch);
  double winding = r.lift_periods * phase / kTwoPi;
  r.raw = -winding;
  if (std::abs(winding - std::round(winding)) > 0.01) {
    std::ostringstream os;
    os << "winding of chi is " << winding << ", not an integer";
    fail(ErrorCode::NonIntegerWinding, os.str());
  }
  r.index = -static_cast<int>(std::lround(winding));
  return r;
}

Monodromy monodromy(const SampledCurve& closed, double tol) {
  if (!closed.periodic()) fail(ErrorCode::NotClosed, "monodromy needs a closed curve");
  WNormalized w = normalize_wilczynski(closed);
  return classify(w.end_mismatch, 0.0, tol);
}

Monodromy monodromy(const std::function<PseudoVector(double)>& lift, double period, double tol) {
  PseudoVector a = lift(0.0), b = lift(period);
  Eigen::Index j;
  a.cwiseAbs().maxCoeff(&j);
  Complex eps = b(j) / a(j);
  double spread = (b - eps * a).norm() / a.norm();
  if (spread > tol) {
    std::ostringstream os;
    os << "lift does not return to a multiple of itself (spread " << spread << ")";
    fail(ErrorCode::NotClosed, os.str());
  }
  return classify(eps, spread, tol);
}

StrandGeometry strand_geometry(const SampledCurve& curve) {
  auto p = positions(closed_heisenberg(curve));
  const std::size_t n = p.size();
  StrandGeometry g;
  g.separation = std::numeric_limits<double>::infinity();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = (p[i] - p[(i + j) % n]).norm();
      g.diameter = std::max(g.diameter, d[j]);
    }
    // Leave the own strand: walk both ways while the distance grows.
    std::size_t lo = 1, hi = n - 1;
    while (lo < n - 1 && d[lo + 1] >= d[lo]) ++lo;
    while (hi > lo && d[hi - 1] >= d[hi]) --hi;
    for (std::size_t j = lo; j <= hi && j < n; ++j) g.separation = std::min(g.separation, d[j]);
  }
  if (!std::isfinite(g.separation)) g.separation = g.diameter;
  return g;
}

double default_epsilon(const SampledCurve& curve) {
  StrandGeometry g = strand_geometry(curve);
  return std::min(0.05 * g.diameter, 0.2 * g.separation);
}

SampledCurve contact_pushoff(const SampledCurve& curve, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  SampledCurve c = curve.model() == CurveModel::Heisenberg ? curve : to_heisenberg(curve);
  std::vector<HeisenbergPoint> out(c.size());
  std::vector<Eigen::Vector3d> base(c.size()), push(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const HeisenbergPoint& p = c.points()[k];
    Eigen::Vector3d xi(1.0, 0.0, p.y);
    base[k] = p.vec();
    push[k] = base[k] + epsilon * xi.normalized();
    out[k] = HeisenbergPoint::from(push[k]);
  }
  check_pushoff(base, push, epsilon);
  return SampledCurve::heisenberg(c.params(), std::move(out), c.periodic(), c.period());
}

SampledCurve heisenberg_curve(const WilczynskiData& data) { return to_heisenberg(data.curve); }

SampledCurve cr_pushoff(const WilczynskiData& data, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  const std::size_t n = data.curve.size();
  std::vector<HeisenbergPoint> out(n);
  std::vector<Eigen::Vector3d> base(n), push(n);
  for (std::size_t k = 0; k < n; ++k) {
    Trihedron tr = cr_trihedron(data, k);
    base[k] = tr.point.vec();
    push[k] = base[k] + epsilon * tr.N.normalized();
    out[k] = HeisenbergPoint::from(push[k]);
  }
  check_pushoff(base, push, epsilon);
  return SampledCurve::heisenberg(data.curve.params(), std::move(out), data.curve.periodic(),
                                  data.curve.period());
}

LinkingResult gauss_linking(const SampledCurve& a, const SampledCurve& b, std::size_t n) {
  if (n < 8) fail(ErrorCode::TooFewSamples, "linking quadrature needs at least 8 points");
  ArcGrid A = arc_grid(a, n), B = arc_grid(b, n);
  const double wa = A.length / static_cast<double>(n), wb = B.length / static_cast<double>(n);

  constexpr std::size_t kBlock = 32;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_sum(blocks), block_min(blocks);
  auto run_block = [&](std::size_t blk) {
    Accumulator acc;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = blk * kBlock; i < std::min(n, (blk + 1) * kBlock); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Eigen::Vector3d d = A.p[i] - B.p[j];
        double r2 = d.squaredNorm();
        double r = std::sqrt(r2);
        dmin = std::min(dmin, r);
        acc.add(d.dot(A.t[i].cross(B.t[j])) / (r2 * r));
      }
    }
    block_sum[blk] = acc.value();
    block_min[blk] = dmin;
  };
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(blocks));
  if (workers <= 1) {
    for (std::size_t blk = 0; blk < blocks; ++blk) run_block(blk);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t blk = w; blk < blocks; blk += workers) run_block(blk);
      });
    for (auto& t : pool) t.join();
  }
  Accumulator total;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    total.add(block_sum[blk]);
    dmin = std::min(dmin, block_min[blk]);
  }
  if (dmin < 1e-6) {
    std::ostringstream os;
    os << "curves intersect (distance " << dmin << ")";
    fail(ErrorCode::CurvesIntersect, os.str());
  }
  LinkingResult r;
  r.raw = total.value() * wa * wb / (4.0 * std::numbers::pi);
  r.rounded = std::lround(r.raw);
  r.residual = std::abs(r.raw - static_cast<double>(r.rounded));
  r.quadrature_points = n;
  r.min_distance = dmin;
  return r;
}

namespace {

void require_stable(const LinkingEstimate& e, const char* what) {
  if (!e.stable()) {
    std::ostringstream os;
    os << what << " differs under epsilon halving: " << e.at_epsilon.raw << " at "
       << e.at_epsilon.epsilon << ", " << e.at_half.raw << " at " << e.at_half.epsilon;
    fail(ErrorCode::Unstable, os.str());
  }
}

}  // namespace

LinkingEstimate bennequin_sweep(const SampledCurve& curve, double epsilon, std::size_t n) {
  SampledCurve c = closed_heisenberg(curve);
  if (!(epsilon > 0.0)) epsilon = default_epsilon(c);
  LinkingEstimate e;
  e.at_epsilon = gauss_linking(c, contact_pushoff(c, epsilon), n);
  e.at_epsilon.epsilon = epsilon;
  e.at_half = gauss_linking(c, contact_pushoff(c, 0.5 * epsilon), n);
  e.at_half.epsilon = 0.5 * epsilon;
  return e;
}

LinkingEstimate self_linking_sweep(const WilczynskiData& data, double epsilon, std::size_t n) {
  SampledCurve c = heisenberg_curve(data);
  if (!c.periodic()) fail(ErrorCode::NotClosed, "self-linking needs a closed curve");
  if (!(epsilon > 0.0)) epsilon = default_epsilon(c);
  LinkingEstimate e;
  e.at_epsilon = gauss_linking(c, cr_pushoff(data, epsilon), n);
  e.at_epsilon.epsilon = epsilon;
  e.at_half = gauss_linking(c, cr_pushoff(data, 0.5 * epsilon), n);
  e.at_half.epsilon = 0.5 * epsilon;
  return e;
}

LinkingEstimate bennequin_estimate(const SampledCurve& curve, double epsilon, std::size_t n) {
  LinkingEstimate e = bennequin_sweep(curve, epsilon, n);
  require_stable(e, "Bennequin number");
  return e;
}

LinkingEstimate self_linking_estimate(const WilczynskiData& data, double epsilon, std::size_t n) {
  LinkingEstimate e = self_linking_sweep(data, epsilon, n);
  require_stable(e, "CR self-linking number");
  return e;
}

}  // namespace cr3
