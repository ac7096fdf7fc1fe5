#include <gtest/gtest.h>

#include <cstdlib>

#include "cr3/curves.hpp"
#include "cr3/error.hpp"
#include "cr3/knots.hpp"
#include "support.hpp"

using namespace cr3;
using cr3::test::kPi;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Io;
}

SampledCurve circle(std::size_t n, Eigen::Vector3d centre, Eigen::Vector3d u, Eigen::Vector3d v) {
  std::vector<double> s(n);
  std::vector<HeisenbergPoint> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
    p[k] = HeisenbergPoint::from(centre + std::cos(s[k]) * u + std::sin(s[k]) * v);
  }
  return SampledCurve::heisenberg(s, p, true, 2 * kPi);
}

SampledCurve reversed(const SampledCurve& c) {
  std::vector<HeisenbergPoint> p(c.points().rbegin(), c.points().rend());
  return SampledCurve::heisenberg(c.params(), p, true, c.period());
}

// Naive Gauss double sum with analytic tangents of two circles.
double gauss_oracle(Eigen::Vector3d ca, Eigen::Vector3d ua, Eigen::Vector3d va, Eigen::Vector3d cb,
                    Eigen::Vector3d ub, Eigen::Vector3d vb, int n) {
  double acc = 0.0, h = 2 * kPi / n;
  for (int i = 0; i < n; ++i) {
    double t = i * h;
    Eigen::Vector3d a = ca + std::cos(t) * ua + std::sin(t) * va, da = -std::sin(t) * ua + std::cos(t) * va;
    for (int j = 0; j < n; ++j) {
      double s = j * h;
      Eigen::Vector3d b = cb + std::cos(s) * ub + std::sin(s) * vb, db = -std::sin(s) * ub + std::cos(s) * vb;
      Eigen::Vector3d d = a - b;
      acc += d.dot(da.cross(db)) / std::pow(d.norm(), 3);
    }
  }
  return acc * h * h / (4 * kPi);
}

SampledCurve lift_from(const SymmetricConfiguration& cfg, std::size_t n, double s0, Complex scale = 1.0) {
  const double T = cfg.curve_period();
  std::vector<double> s(n);
  std::vector<PseudoVector> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    s[k] = T * static_cast<double>(k) / static_cast<double>(n);
    v[k] = scale * cfg.lift(s[k] + s0);
  }
  return SampledCurve::lift(s, v, true, T, cfg.forms().spin.phase());
}

double min_distance(const SampledCurve& a, const SampledCurve& b) {
  double d = INFINITY;
  for (const auto& p : a.points())
    for (const auto& q : b.points()) d = std::min(d, (p.vec() - q.vec()).norm());
  return d;
}

class ScopedWorkers {
 public:
  explicit ScopedWorkers(const char* n) {
    if (const char* old = std::getenv("CR3_WORKERS")) saved_ = old, had_ = true;
    setenv("CR3_WORKERS", n, 1);
  }
  ~ScopedWorkers() {
    if (had_)
      setenv("CR3_WORKERS", saved_.c_str(), 1);
    else
      unsetenv("CR3_WORKERS");
  }

 private:
  std::string saved_;
  bool had_ = false;
};

}  // namespace

TEST(Maslov, Configurations) {
  MaslovResult m = maslov_numeric(SymmetricConfiguration(test::second_34()).sample_lift(512));
  EXPECT_EQ(m.index, 7);
  EXPECT_NEAR(m.raw, 7.0, 1e-6);
  EXPECT_EQ(m.lift_periods, 3);
  m = maslov_numeric(SymmetricConfiguration(test::first_74()).sample_lift(512));
  EXPECT_EQ(m.index, -1);
  EXPECT_EQ(m.lift_periods, 1);
}

TEST(Maslov, ClosedFormHoldsWhenTheGcdIsThree) {
  // The closed form p + q is the numeric winding only for spin 1/3 ratios;
  // at r = -1 the winding is 1 while p + q = 3.
  SymmetricConfiguration cfg({ConfigKind::Second, make_ratio(-1, 1), 0.5});
  EXPECT_EQ(maslov_numeric(cfg.sample_lift(512)).index, 1);
  EXPECT_EQ(cfg.forms().maslov, 3);
}

TEST(Maslov, InvariantUnderShiftCentreAndGroup) {
  SymmetricConfiguration cfg(test::second_34());
  const double T = cfg.curve_period();
  std::mt19937 rng(61);
  for (int e = 0; e < 3; ++e) {
    Complex w = std::polar(1.0, 2 * kPi * e / 3);
    EXPECT_EQ(maslov_numeric(lift_from(cfg, 512, 0.0, w)).index, 7);
    EXPECT_EQ(maslov_numeric(lift_from(cfg, 512, 0.37 * T)).index, 7);
  }
  for (int trial = 0; trial < 3; ++trial)
    EXPECT_EQ(maslov_numeric(test::transform(test::random_group(rng, 0.1), cfg.sample_lift(512))).index, 7);
  EXPECT_EQ(maslov_numeric(cfg.sample_heisenberg(512)).index, 7);
}

TEST(Maslov, ErrorsOnOpenCurves) {
  SampledCurve arc = SampledCurve::lift({0, 1, 2, 3, 4, 5}, std::vector<PseudoVector>(6, PseudoVector(1, 0, 0)), false, 0);
  EXPECT_EQ(code_of([&] { maslov_numeric(arc); }), ErrorCode::NotClosed);
}

TEST(Monodromy, Configurations) {
  SymmetricConfiguration second(test::second_34());
  Monodromy m = monodromy(second.sample_lift(512));
  EXPECT_EQ(m.spin_denominator, 3);
  EXPECT_EQ(m.anomaly_thirds, 2);
  EXPECT_LT(std::abs(m.epsilon - std::polar(1.0, 4 * kPi / 3)), 1e-7);
  m = monodromy([&](double s) { return second.lift(s); }, second.curve_period());
  EXPECT_LT(std::abs(m.epsilon - std::polar(1.0, 4 * kPi / 3)), 1e-7);
  EXPECT_LT(m.spread, 1e-7);
  EXPECT_NEAR(m.anomaly, 4 * kPi / 3, 1e-7);

  SymmetricConfiguration first(test::first_74());
  m = monodromy(first.sample_lift(512));
  EXPECT_EQ(m.spin_denominator, 1);
  EXPECT_LT(std::abs(m.epsilon - 1.0), 1e-7);
}

TEST(Monodromy, RejectsNonClosingLifts) {
  SymmetricConfiguration cfg(test::second_34());
  EXPECT_EQ(code_of([&] { monodromy([&](double s) { return cfg.lift(s); }, 0.5 * cfg.curve_period()); }),
            ErrorCode::NotClosed);
  // Closes up to a factor that is not a cube root of unity.
  EXPECT_EQ(code_of([&] {
              monodromy([&](double s) { return std::exp(Complex(0, s)) * cfg.lift(s); }, cfg.curve_period());
            }),
            ErrorCode::NotCubeRoot);
}

TEST(ContactPushoff, CircleInTheXzPlaneTranslates) {
  // On y = 0 the direction field is the x unit vector.
  SampledCurve c = circle(64, {0, 0, 0}, {0.02, 0, 0}, {0, 0, 0.02});
  SampledCurve p = contact_pushoff(c, 0.1);
  for (std::size_t k = 0; k < c.size(); ++k)
    EXPECT_LT((p.points()[k].vec() - c.points()[k].vec() - Eigen::Vector3d(0.1, 0, 0)).norm(), 1e-15);
  EXPECT_NEAR(min_distance(c, p), 0.1 - 0.04, 1e-3);
}

TEST(ContactPushoff, DirectionLiesInContactPlane) {
  SymmetricConfiguration cfg(test::second_34());
  SampledCurve c = cfg.sample_heisenberg(256);
  SampledCurve p = contact_pushoff(c, 0.05);
  for (std::size_t k = 0; k < c.size(); ++k) {
    Eigen::Vector3d d = (p.points()[k].vec() - c.points()[k].vec()) / 0.05;
    EXPECT_NEAR(d.norm(), 1.0, 1e-12);
    EXPECT_NEAR(contact_form(c.points()[k], d), 0.0, 1e-12);
  }
}

TEST(ContactPushoff, ConfigurationCompanionIsDisjoint) {
  SymmetricConfiguration cfg(test::second_34());
  SampledCurve c = cfg.sample_heisenberg(1024);
  SampledCurve p = contact_pushoff(c, 0.05);
  EXPECT_GE(min_distance(c, p), 0.8 * 0.05);
  EXPECT_EQ(code_of([&] { contact_pushoff(c, 0.0); }), ErrorCode::InvalidArgument);
}

TEST(ContactPushoff, OversizedEpsilonIsRejected) {
  SampledCurve c = SymmetricConfiguration(test::second_34()).sample_heisenberg(512);
  EXPECT_EQ(code_of([&] { contact_pushoff(c, 5.0); }), ErrorCode::SelfIntersecting);
}

TEST(StrandGeometry, Circle) {
  StrandGeometry g = strand_geometry(circle(200, {0, 0, 0}, {2, 0, 0}, {0, 2, 0}));
  EXPECT_NEAR(g.diameter, 4.0, 1e-12);
  EXPECT_NEAR(default_epsilon(circle(200, {0, 0, 0}, {2, 0, 0}, {0, 2, 0})), 0.2, 1e-12);
}

TEST(CrPushoff, TransversalAndShrinksLinearly) {
  SymmetricConfiguration cfg(test::second_34());
  WilczynskiData d = wilczynski_frame(cfg.sample_lift(512));
  SampledCurve base = heisenberg_curve(d);
  for (double eps : {0.05, 0.025, 0.0125}) {
    SampledCurve p = cr_pushoff(d, eps);
    EXPECT_NEAR(test::hausdorff(test::positions(base), test::positions(p)) / eps, 1.0, 0.05) << eps;
    auto D = point_derivatives(p, 1);
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_GT(contact_form(p.points()[k], D[1][k]), 0.0);
  }
}

TEST(CrPushoff, EquivariantUnderHeisenbergTranslation) {
  // (x, y, z) -> (x + a, y + b, z + c + b x - a y) preserves the contact form.
  const double a = 0.7, b = -0.4, c = 1.3;
  auto translate = [&](const Eigen::Vector3d& p) {
    return Eigen::Vector3d(p(0) + a, p(1) + b, p(2) + c + b * p(0) - a * p(1));
  };
  Eigen::Matrix3d dT;
  dT << 1, 0, 0, 0, 1, 0, b, -a, 1;
  SymmetricConfiguration cfg(test::second_34());
  SampledCurve h = cfg.sample_heisenberg(512);
  std::vector<HeisenbergPoint> moved;
  for (const auto& p : h.points()) moved.push_back(HeisenbergPoint::from(translate(p.vec())));
  SampledCurve ht = SampledCurve::heisenberg(h.params(), moved, true, h.period());
  WilczynskiData d0 = analyze_curve(h), d1 = analyze_curve(ht);
  SampledCurve b0 = heisenberg_curve(d0), b1 = heisenberg_curve(d1);
  SampledCurve p0 = cr_pushoff(d0, 0.05), p1 = cr_pushoff(d1, 0.05);
  for (std::size_t k = 0; k < p0.size(); ++k) {
    EXPECT_LT((translate(b0.points()[k].vec()) - b1.points()[k].vec()).norm(), 1e-8);
    Eigen::Vector3d u = (dT * (p0.points()[k].vec() - b0.points()[k].vec())).normalized();
    Eigen::Vector3d w = (p1.points()[k].vec() - b1.points()[k].vec()).normalized();
    EXPECT_LT((u - w).norm(), 1e-6);
  }
}

TEST(GaussLinking, FarCircles) {
  SampledCurve a = circle(256, {0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  SampledCurve b = circle(256, {0, 0, 10}, {1, 0, 0}, {0, 1, 0});
  LinkingResult r = gauss_linking(a, b, 256);
  EXPECT_EQ(r.rounded, 0);
  EXPECT_LT(r.residual, 1e-6);
  EXPECT_TRUE(r.valid());
}

TEST(GaussLinking, HopfPairSign) {
  // B crosses the disc of A downwards at its centre: linking number -1.
  Eigen::Vector3d ca(0, 0, 0), ua(1, 0, 0), va(0, 1, 0), cb(1, 0, 0), ub(1, 0, 0), vb(0, 0, 1);
  double oracle = gauss_oracle(ca, ua, va, cb, ub, vb, 800);
  EXPECT_NEAR(oracle, -1.0, 1e-3);
  LinkingResult r = gauss_linking(circle(512, ca, ua, va), circle(512, cb, ub, vb), 512);
  EXPECT_EQ(r.rounded, -1);
  EXPECT_NEAR(r.raw, oracle, 1e-3);
  EXPECT_LT(r.residual, 1e-3);
  EXPECT_NEAR(r.min_distance, 1.0, 1e-12);
}

TEST(GaussLinking, SymmetryAndReversal) {
  std::mt19937 rng(62);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Vector3d cb(1 + 0.2 * u(rng), 0.2 * u(rng), 0.2 * u(rng));
    SampledCurve a = circle(256, {0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    SampledCurve b = circle(256, cb, {1, 0, 0.1 * u(rng)}, {0, 0.1 * u(rng), 1});
    double ab = gauss_linking(a, b, 256).raw, ba = gauss_linking(b, a, 256).raw;
    EXPECT_LT(std::abs(ab - ba), 1e-8);
    EXPECT_LT(std::abs(gauss_linking(reversed(a), b, 256).raw + ab), 1e-8);
    EXPECT_LT(std::abs(gauss_linking(a, reversed(b), 256).raw + ab), 1e-8);
  }
}

TEST(GaussLinking, Errors) {
  SampledCurve a = circle(64, {0, 0, 0}, {1, 0, 0}, {0, 1, 0});
  EXPECT_EQ(code_of([&] { gauss_linking(a, a, 64); }), ErrorCode::CurvesIntersect);
  EXPECT_EQ(code_of([&] { gauss_linking(a, a, 4); }), ErrorCode::TooFewSamples);
}

TEST(Linking, SecondKindThreeFour) {
  SymmetricConfiguration cfg(test::second_34());
  LinkingEstimate beta = bennequin_estimate(cfg.sample_heisenberg(1024));
  EXPECT_EQ(beta.at_epsilon.rounded, 5);
  EXPECT_TRUE(beta.at_epsilon.valid());
  EXPECT_TRUE(beta.at_half.valid());

  WilczynskiData d = wilczynski_frame(cfg.sample_lift(1024));
  LinkingEstimate sl = self_linking_estimate(d);
  EXPECT_EQ(sl.at_epsilon.rounded, 12);
  EXPECT_TRUE(sl.at_epsilon.valid());
  EXPECT_TRUE(sl.at_half.valid());

  LinkingResult fixed = gauss_linking(heisenberg_curve(d), cr_pushoff(d, 0.05), 1024);
  EXPECT_EQ(fixed.rounded, 12);
  EXPECT_LT(fixed.residual, 0.1);
}

TEST(Linking, SecondKindOneTwo) {
  SymmetricConfiguration cfg({ConfigKind::Second, make_ratio(-1, 1), 0.5});
  EXPECT_EQ(bennequin_estimate(cfg.sample_heisenberg(1024)).at_epsilon.rounded, -1);
  EXPECT_EQ(self_linking_estimate(wilczynski_frame(cfg.sample_lift(1024))).at_epsilon.rounded, 2);
}

TEST(Linking, FirstKindTwoMinusOne) {
  // pq + p + q = -1 and pq = -2.
  SymmetricConfiguration cfg({ConfigKind::First, make_ratio(-4, 5), 0.4});
  EXPECT_EQ(cfg.forms().knot, (KnotType{2, -1}));
  EXPECT_EQ(bennequin_estimate(cfg.sample_heisenberg(1024)).at_epsilon.rounded, -1);
  EXPECT_EQ(self_linking_estimate(wilczynski_frame(cfg.sample_lift(1024))).at_epsilon.rounded, -2);
}

TEST(Linking, FirstKindSevenMinusFourStrandsTooClose) {
  // Strands of the (7,-4) curve at rho = 0.47343 come closer than the contact
  // push-off can clear at 1024 samples.
  SymmetricConfiguration cfg(test::first_74());
  EXPECT_EQ(code_of([&] { bennequin_estimate(cfg.sample_heisenberg(1024)); }), ErrorCode::SelfIntersecting);
}

TEST(Linking, QuadratureConverged) {
  SymmetricConfiguration cfg(test::second_34());
  SampledCurve h = cfg.sample_heisenberg(2048);
  double eps = default_epsilon(h);
  SampledCurve p = contact_pushoff(h, eps);
  EXPECT_LT(std::abs(gauss_linking(h, p, 1024).raw - gauss_linking(h, p, 2048).raw), 1e-3);
}

TEST(Linking, WorkerCountDoesNotChangeBits) {
  SymmetricConfiguration cfg(test::second_34());
  SampledCurve h = cfg.sample_heisenberg(512);
  SampledCurve p = contact_pushoff(h, 0.1);
  double serial, parallel;
  {
    ScopedWorkers w("1");
    EXPECT_EQ(worker_count(), 1u);
    serial = gauss_linking(h, p, 512).raw;
  }
  {
    ScopedWorkers w("5");
    EXPECT_EQ(worker_count(), 5u);
    parallel = gauss_linking(h, p, 512).raw;
  }
  EXPECT_EQ(serial, parallel);
}
