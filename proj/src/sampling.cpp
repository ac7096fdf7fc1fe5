#include "cr3/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "cr3/error.hpp"

namespace cr3 {

namespace {

const Complex I(0.0, 1.0);

// Fornberg's recursion: weights of the derivatives 0..m at x0 from nodes x.
std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& x, int m) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    int mn = std::min<int>(static_cast<int>(i), m);
    double c2 = 1.0, c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

int stencil_width(int order) { return (order + 4) | 1; }

// Finite differences of generic samples. `fetch(j)` returns the (possibly
// wrapped) sample at integer offset j from the grid start.
template <class V, class Fetch>
std::vector<std::vector<V>> fd_derivatives(std::size_t n, bool periodic, double h, int order,
                                           const V& zero, Fetch fetch) {
  std::vector<std::vector<V>> out(order + 1, std::vector<V>(n, zero));
  const int w = stencil_width(order);
  const int half = w / 2;
  // Interior / periodic weights are shift invariant.
  std::vector<double> nodes(w);
  for (int j = 0; j < w; ++j) nodes[j] = static_cast<double>(j - half);
  auto central = fd_weights(0.0, nodes, order);
  for (std::size_t i = 0; i < n; ++i) {
    long lo = static_cast<long>(i) - half;
    const std::vector<std::vector<double>>* wt = &central;
    std::vector<std::vector<double>> local;
    if (!periodic) {
      long shift = 0;
      if (lo < 0) shift = -lo;
      if (lo + w > static_cast<long>(n)) shift = static_cast<long>(n) - (lo + w);
      if (shift != 0) {
        lo += shift;
        std::vector<double> xs(w);
        for (int j = 0; j < w; ++j) xs[j] = static_cast<double>(lo + j - static_cast<long>(i));
        local = fd_weights(0.0, xs, order);
        wt = &local;
      }
    }
    for (int j = 0; j < w; ++j) {
      V f = fetch(lo + j);
      for (int k = 0; k <= order; ++k) {
        double c = (*wt)[k][j];
        if (c != 0.0) out[k][i] += (c / std::pow(h, k)) * f;
      }
    }
  }
  return out;
}

std::vector<Complex> fft_forward(const std::vector<Complex>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

std::vector<Complex> fft_inverse(const std::vector<Complex>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.inv(out, in);
  return out;
}

}  // namespace

void SampledCurve::validate(std::size_t n_values) {
  const std::size_t n = params_.size();
  if (n_values != n) fail(ErrorCode::InvalidArgument, "parameter and sample counts differ");
  if (n < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  for (std::size_t k = 1; k < n; ++k)
    if (!(params_[k] > params_[k - 1]))
      fail(ErrorCode::InvalidArgument, "parameters must be strictly increasing");
  if (periodic_) {
    if (!(period_ > 0.0)) fail(ErrorCode::InvalidArgument, "period must be positive");
    if (params_.back() >= params_.front() + period_)
      fail(ErrorCode::InvalidArgument, "periodic samples must lie in [s0, s0 + period)");
    spacing_ = period_ / static_cast<double>(n);
  } else {
    spacing_ = (params_.back() - params_.front()) / static_cast<double>(n - 1);
    period_ = params_.back() - params_.front();
  }
  for (std::size_t k = 1; k < n; ++k) {
    double d = params_[k] - params_[k - 1];
    if (std::abs(d - spacing_) > 1e-8 * spacing_)
      fail(ErrorCode::NotUniform, "samples are not uniformly spaced");
  }
}

SampledCurve SampledCurve::heisenberg(std::vector<double> params, std::vector<HeisenbergPoint> points,
                                      bool periodic, double period) {
  SampledCurve c;
  c.model_ = CurveModel::Heisenberg;
  c.params_ = std::move(params);
  c.points_ = std::move(points);
  c.periodic_ = periodic;
  c.period_ = period;
  c.validate(c.points_.size());
  return c;
}

SampledCurve SampledCurve::lift(std::vector<double> params, std::vector<PseudoVector> lifts,
                                bool periodic, double period, Complex monodromy) {
  SampledCurve c;
  c.model_ = CurveModel::Lift;
  c.params_ = std::move(params);
  c.lifts_ = std::move(lifts);
  c.periodic_ = periodic;
  c.period_ = period;
  c.monodromy_ = periodic ? monodromy : Complex(1.0);
  if (periodic && std::abs(monodromy) == 0.0)
    fail(ErrorCode::InvalidArgument, "monodromy must be nonzero");
  c.validate(c.lifts_.size());
  for (const auto& v : c.lifts_) {
    double n = v.squaredNorm();
    if (n == 0.0 || std::abs(herm_product(v, v)) > 1e-8 * n)
      fail(ErrorCode::NotNull, "lift samples must be lightlike");
  }
  return c;
}

SampledCurve to_lift(const SampledCurve& curve) {
  if (curve.model() == CurveModel::Lift) return curve;
  std::vector<PseudoVector> l;
  l.reserve(curve.size());
  for (const auto& p : curve.points()) l.push_back(chart_lift(p));
  SampledCurve out = SampledCurve::lift(curve.params(), std::move(l), curve.periodic(),
                                        curve.period(), 1.0);
  out.set_scheme(curve.scheme());
  return out;
}

SampledCurve to_heisenberg(const SampledCurve& curve) {
  if (curve.model() == CurveModel::Heisenberg) return curve;
  std::vector<HeisenbergPoint> p;
  p.reserve(curve.size());
  for (const auto& v : curve.lifts()) p.push_back(heisenberg_projection(v));
  SampledCurve out = SampledCurve::heisenberg(curve.params(), std::move(p), curve.periodic(),
                                              curve.period());
  out.set_scheme(curve.scheme());
  return out;
}

TrigSeries::TrigSeries(const std::vector<Complex>& samples, double period) : period_(period) {
  const std::size_t n = samples.size();
  if (n < 3) fail(ErrorCode::TooFewSamples, "trigonometric interpolation needs 3 samples");
  coef_ = fft_forward(samples);
  freq_.resize(n);
  const double w0 = 2.0 * std::numbers::pi / period;
  for (std::size_t j = 0; j < n; ++j) {
    long k = static_cast<long>(j);
    if (2 * j > n) k -= static_cast<long>(n);
    freq_[j] = w0 * static_cast<double>(k);
    coef_[j] /= static_cast<double>(n);
  }
}

Complex TrigSeries::mean() const { return coef_[0]; }

Complex TrigSeries::eval(double t, int deriv) const {
  const std::size_t n = coef_.size();
  const bool nyquist = n % 2 == 0;
  const double w0 = 2.0 * std::numbers::pi / period_;
  // z^k by recurrence, renormalized to stay on the unit circle.
  const Complex z = std::polar(1.0, w0 * t);
  auto factor = [deriv](double w) {
    Complex f = 1.0;
    for (int d = 0; d < deriv; ++d) f *= I * w;
    return f;
  };
  Complex sum = coef_[0] * factor(0.0);
  Complex zp = 1.0, zn = 1.0;
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k <= half; ++k) {
    zp *= z;
    zn *= std::conj(z);
    if (k % 64 == 0) {
      zp = std::polar(1.0, w0 * t * static_cast<double>(k));
      zn = std::conj(zp);
    }
    const double w = w0 * static_cast<double>(k);
    if (nyquist && k == half) {
      sum += 0.5 * coef_[k] * (factor(w) * zp + factor(-w) * zn);
    } else {
      sum += coef_[k] * factor(w) * zp;
      sum += coef_[n - k] * factor(-w) * zn;
    }
  }
  return sum;
}

Complex TrigSeries::periodic_integral(double t) const {
  const std::size_t n = coef_.size();
  const bool nyquist = n % 2 == 0;
  Complex sum = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    double w = freq_[j];
    if (nyquist && 2 * j == n) {
      // Integral of cos(w t) is sin(w t)/w.
      sum += coef_[j] * std::sin(w * t) / w;
    } else {
      sum += coef_[j] * (std::exp(I * w * t) - 1.0) / (I * w);
    }
  }
  return sum;
}

std::vector<Complex> TrigSeries::grid_derivative(int deriv) const {
  const std::size_t n = coef_.size();
  // Modes above the last one clearing the rounding floor are noise, which
  // differentiation would amplify by k^deriv.
  double cmax = 0.0;
  for (const Complex& v : coef_) cmax = std::max(cmax, std::abs(v));
  std::size_t kcut = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t k = 2 * j <= n ? j : n - j;
    if (std::abs(coef_[j]) > 1e-15 * cmax) kcut = std::max(kcut, k);
  }
  std::vector<Complex> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t k = 2 * j <= n ? j : n - j;
    if (k > kcut || (n % 2 == 0 && 2 * j == n && deriv % 2 == 1)) {
      c[j] = 0.0;
    } else {
      c[j] = coef_[j] * static_cast<double>(n) * std::pow(I * freq_[j], deriv);
    }
  }
  return fft_inverse(c);
}

std::vector<std::vector<PseudoVector>> lift_derivatives(const SampledCurve& curve, int order) {
  if (curve.model() != CurveModel::Lift)
    return lift_derivatives(to_lift(curve), order);
  if (order < 0 || order > 4) fail(ErrorCode::InvalidArgument, "derivative order out of range");
  const std::size_t n = curve.size();
  const auto& L = curve.lifts();
  const double h = curve.spacing();

  if (curve.periodic() && curve.scheme() == DerivativeScheme::Spectral) {
    const double T = curve.period();
    const Complex beta = std::log(curve.monodromy()) / T;
    const double s0 = curve.params().front();
    // Periodic part g = exp(-beta (s - s0)) Gamma.
    std::vector<std::vector<PseudoVector>> gd(order + 1, std::vector<PseudoVector>(n));
    for (int c = 0; c < 3; ++c) {
      std::vector<Complex> g(n);
      for (std::size_t k = 0; k < n; ++k)
        g[k] = std::exp(-beta * (curve.params()[k] - s0)) * L[k](c);
      TrigSeries ts(g, T);
      for (int d = 0; d <= order; ++d) {
        std::vector<Complex> v = d == 0 ? g : ts.grid_derivative(d);
        for (std::size_t k = 0; k < n; ++k) gd[d][k](c) = v[k];
      }
    }
    std::vector<std::vector<PseudoVector>> out(order + 1, std::vector<PseudoVector>(n));
    static const int binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    for (std::size_t k = 0; k < n; ++k) {
      Complex e = std::exp(beta * (curve.params()[k] - s0));
      for (int d = 0; d <= order; ++d) {
        PseudoVector acc = PseudoVector::Zero();
        for (int j = 0; j <= d; ++j) acc += static_cast<double>(binom[d][j]) * std::pow(beta, d - j) * gd[j][k];
        out[d][k] = e * acc;
      }
      out[0][k] = L[k];
    }
    return out;
  }

  const Complex m = curve.monodromy();
  const long nn = static_cast<long>(n);
  auto fetch = [&](long j) -> PseudoVector {
    if (!curve.periodic()) return L[static_cast<std::size_t>(j)];
    long q = j >= 0 ? j / nn : -((-j + nn - 1) / nn);
    long r = j - q * nn;
    return std::pow(m, static_cast<double>(q)) * L[static_cast<std::size_t>(r)];
  };
  return fd_derivatives<PseudoVector>(n, curve.periodic(), h, order, PseudoVector::Zero(), fetch);
}

std::vector<std::vector<Eigen::Vector3d>> point_derivatives(const SampledCurve& curve, int order) {
  if (curve.model() != CurveModel::Heisenberg)
    return point_derivatives(to_heisenberg(curve), order);
  if (order < 0 || order > 4) fail(ErrorCode::InvalidArgument, "derivative order out of range");
  const std::size_t n = curve.size();
  const auto& P = curve.points();
  if (curve.periodic() && curve.scheme() == DerivativeScheme::Spectral) {
    std::vector<std::vector<Eigen::Vector3d>> out(order + 1, std::vector<Eigen::Vector3d>(n));
    for (int c = 0; c < 3; ++c) {
      std::vector<Complex> g(n);
      for (std::size_t k = 0; k < n; ++k) g[k] = P[k].vec()(c);
      TrigSeries ts(g, curve.period());
      for (int d = 0; d <= order; ++d) {
        std::vector<Complex> v = d == 0 ? g : ts.grid_derivative(d);
        for (std::size_t k = 0; k < n; ++k) out[d][k](c) = v[k].real();
      }
    }
    return out;
  }
  const long nn = static_cast<long>(n);
  auto fetch = [&](long j) -> Eigen::Vector3d {
    long r = ((j % nn) + nn) % nn;
    return P[static_cast<std::size_t>(curve.periodic() ? r : j)].vec();
  };
  return fd_derivatives<Eigen::Vector3d>(n, curve.periodic(), curve.spacing(), order,
                                         Eigen::Vector3d::Zero(), fetch);
}

std::vector<double> scalar_derivative(const std::vector<double>& v, double spacing, bool periodic,
                                      DerivativeScheme scheme, int order) {
  const std::size_t n = v.size();
  if (n < 5) fail(ErrorCode::TooFewSamples, "need at least 5 samples");
  if (periodic && scheme == DerivativeScheme::Spectral) {
    std::vector<Complex> g(v.begin(), v.end());
    TrigSeries ts(g, spacing * static_cast<double>(n));
    std::vector<Complex> d = ts.grid_derivative(order);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = d[k].real();
    return out;
  }
  const long nn = static_cast<long>(n);
  auto fetch = [&](long j) -> double {
    long r = ((j % nn) + nn) % nn;
    return v[static_cast<std::size_t>(periodic ? r : j)];
  };
  return fd_derivatives<double>(n, periodic, spacing, order, 0.0, fetch)[order];
}

LiftInterpolant::LiftInterpolant(const SampledCurve& curve)
    : t_(curve.params()), periodic_(curve.periodic()), period_(curve.period()) {
  if (curve.model() != CurveModel::Lift) fail(ErrorCode::InvalidArgument, "lift-valued curve required");
  const std::size_t n = curve.size();
  if (periodic_) {
    beta_ = std::log(curve.monodromy()) / period_;
    const double s0 = curve.params().front();
    for (int c = 0; c < 3; ++c) {
      std::vector<Complex> g(n);
      for (std::size_t k = 0; k < n; ++k)
        g[k] = std::exp(-beta_ * (curve.params()[k] - s0)) * curve.lifts()[k](c);
      series_.emplace_back(g, period_);
    }
  } else {
    d_ = lift_derivatives(curve, 1);
  }
}

PseudoVector LiftInterpolant::eval(double s, int deriv) const {
  if (deriv < 0 || deriv > 2) fail(ErrorCode::InvalidArgument, "derivative order out of range");
  const auto& t = t_;
  if (periodic_) {
    double u = s - t.front();
    PseudoVector g[3];
    for (int d = 0; d <= deriv; ++d)
      for (int c = 0; c < 3; ++c) g[d](c) = series_[c].eval(u, d);
    Complex e = std::exp(beta_ * u);
    if (deriv == 0) return e * g[0];
    if (deriv == 1) return e * (beta_ * g[0] + g[1]);
    return e * (beta_ * beta_ * g[0] + 2.0 * beta_ * g[1] + g[2]);
  }
  // Cubic Hermite on the bracketing interval.
  const std::size_t n = t.size();
  if (s < t.front() || s > t.back()) fail(ErrorCode::DomainError, "parameter outside the sampled arc");
  std::size_t k = std::min<std::size_t>(
      n - 2, static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), s) - t.begin()) - 1);
  double h = t[k + 1] - t[k];
  double x = (s - t[k]) / h;
  const PseudoVector& p0 = d_[0][k];
  const PseudoVector& p1 = d_[0][k + 1];
  PseudoVector m0 = d_[1][k] * h, m1 = d_[1][k + 1] * h;
  if (deriv == 0) {
    double x2 = x * x, x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * p0 + (x3 - 2 * x2 + x) * m0 + (-2 * x3 + 3 * x2) * p1 + (x3 - x2) * m1;
  }
  if (deriv == 1) {
    double x2 = x * x;
    return ((6 * x2 - 6 * x) * p0 + (3 * x2 - 4 * x + 1) * m0 + (-6 * x2 + 6 * x) * p1 + (3 * x2 - 2 * x) * m1) / h;
  }
  return ((12 * x - 6) * p0 + (6 * x - 4) * m0 + (-12 * x + 6) * p1 + (6 * x - 2) * m1) / (h * h);
}

}  // namespace cr3
