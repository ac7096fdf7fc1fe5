#include <gtest/gtest.h>

#include "cr3/error.hpp"
#include "support.hpp"

using namespace cr3;
using cr3::test::kPi;

namespace {

const Complex I(0.0, 1.0);

PseudoVector E(int k) {
  PseudoVector v = PseudoVector::Zero();
  v(k - 1) = 1.0;
  return v;
}

// Roots of p by scanning for sign changes and bisecting.
std::vector<double> bisect_roots(const std::function<double(double)>& p, double lo, double hi) {
  std::vector<double> roots;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double a = lo + (hi - lo) * i / n, b = lo + (hi - lo) * (i + 1) / n;
    if (p(a) == 0.0) roots.push_back(a);
    if (p(a) * p(b) >= 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      double m = 0.5 * (a + b);
      (p(a) * p(m) <= 0.0 ? b : a) = m;
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

PseudoMatrix series_exp(const PseudoMatrix& K, double s, int terms) {
  PseudoMatrix sum = PseudoMatrix::Identity(), term = PseudoMatrix::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * K * s / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST(HermProduct, BasisValues) {
  EXPECT_NEAR(std::abs(herm_product(E(1), E(3)) - I), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(herm_product(E(2), E(2)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(herm_product(E(1), E(1))), 0.0, 1e-15);
}

TEST(HermProduct, HermitianSymmetryProperty) {
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    PseudoVector z, w;
    for (int i = 0; i < 3; ++i) {
      z(i) = {g(rng), g(rng)};
      w(i) = {g(rng), g(rng)};
    }
    EXPECT_NEAR(std::abs(herm_product(w, z) - std::conj(herm_product(z, w))), 0.0, 1e-12);
    EXPECT_NEAR(herm_product(z, z).imag(), 0.0, 1e-12);
    // Direct evaluation of conj(z)^T h w.
    Complex direct = std::conj(z(0)) * I * w(2) + std::conj(z(1)) * w(1) - I * std::conj(z(2)) * w(0);
    EXPECT_NEAR(std::abs(herm_product(z, w) - direct), 0.0, 1e-12);
  }
}

TEST(GroupElement, Examples) {
  EXPECT_TRUE(is_group_element(PseudoMatrix::Identity()));
  PseudoMatrix X = PseudoMatrix::Zero();
  X.diagonal() << 2.0, 1.0, 0.5;
  EXPECT_TRUE(is_group_element(X));
  // The diagonalizing basis is pseudo-unitary rather than light-cone:
  // U^H h U = diag(-1, 1, 1), so it is not a group element.
  const PseudoMatrix& U = torus_basis();
  EXPECT_FALSE(is_group_element(U));
  PseudoMatrix G = PseudoMatrix::Zero();
  G.diagonal() << -1.0, 1.0, 1.0;
  EXPECT_LT((U.adjoint() * form_matrix() * U - G).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(U.determinant() - 1.0), 0.0, 1e-15);
  PseudoMatrix Y = PseudoMatrix::Identity() * 2.0;
  EXPECT_FALSE(is_group_element(Y));
}

TEST(GroupElement, PreservesFormProperty) {
  std::mt19937 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    PseudoMatrix A = test::random_group(rng, 0.7);
    ASSERT_TRUE(is_group_element(A));
    EXPECT_LT((group_inverse(A) * A - PseudoMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-9);
    PseudoVector z, w;
    for (int i = 0; i < 3; ++i) {
      z(i) = {g(rng), g(rng)};
      w(i) = {g(rng), g(rng)};
    }
    EXPECT_NEAR(std::abs(herm_product(A * z, A * w) - herm_product(z, w)), 0.0,
                1e-9 * std::max(1.0, A.norm() * A.norm()));
  }
}

TEST(AlgebraElement, WilczynskiGenerator) {
  for (double k : {-1.3, 0.0, 0.5})
    for (double t : {-2.0, 0.0, 3.0}) {
      PseudoMatrix K = wilczynski_generator(k, t);
      EXPECT_TRUE(is_algebra_element(K));
      EXPECT_EQ(K(0, 0), Complex(0, k));
      EXPECT_EQ(K(1, 1), Complex(0, -2 * k));
      EXPECT_EQ(K(0, 2), Complex(t, 0));
    }
}

TEST(CausalCharacter, Examples) {
  EXPECT_EQ(causal_character(E(2)), CausalCharacter::Spacelike);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(causal_character(PseudoVector(r, 0, I * r)), CausalCharacter::Timelike);
  EXPECT_EQ(causal_character(PseudoVector(I * r, 0, r)), CausalCharacter::Spacelike);
  EXPECT_EQ(causal_character(E(1)), CausalCharacter::Lightlike);
}

TEST(CharacteristicCubic, UnitBending) {
  EXPECT_NEAR(characteristic_discriminant(1, 0), 81.0, 1e-12);
  CubicRoots c = solve_characteristic_cubic(1, 0);
  ASSERT_EQ(c.status, CubicStatus::Separated);
  ASSERT_EQ(c.count, 3);
  auto oracle = bisect_roots([](double t) { return t * t * t - 3 * t - 1; }, -3, 3);
  ASSERT_EQ(oracle.size(), 3u);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(c.e[j], oracle[j], 1e-10);
  EXPECT_NEAR(c.e[0], -1.5321, 1e-4);
  EXPECT_NEAR(c.e[1], -0.3473, 1e-4);
  EXPECT_NEAR(c.e[2], 1.8794, 1e-4);
}

TEST(CharacteristicCubic, Origin) {
  EXPECT_NEAR(characteristic_discriminant(0, 0), -27.0, 1e-12);
  CubicRoots c = solve_characteristic_cubic(0, 0);
  EXPECT_EQ(c.status, CubicStatus::NonSeparated);
  ASSERT_GE(c.count, 1);
  EXPECT_NEAR(c.e[0], -1.0, 1e-12);
}

TEST(CharacteristicCubic, RootsAgainstBisectionProperty) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uk(-2, 2), ut(-6, 6);
  int separated = 0;
  for (int trial = 0; trial < 300; ++trial) {
    double k = uk(rng), t = ut(rng);
    CubicRoots c = solve_characteristic_cubic(k, t);
    auto p = [&](double x) { return -x * x * x + (3 * k * k - t) * x + 2 * k * k * k + 2 * k * t - 1; };
    auto oracle = bisect_roots(p, -40, 40);
    if (c.status != CubicStatus::Separated) continue;
    ++separated;
    ASSERT_EQ(oracle.size(), 3u) << k << " " << t;
    double scale = std::max({1.0, std::abs(c.e[0]), std::abs(c.e[2])});
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(c.e[j], oracle[j], 1e-9 * scale);
    EXPECT_NEAR(c.e[0] + c.e[1] + c.e[2], 0.0, 1e-12 * scale);
  }
  EXPECT_GT(separated, 50);
}

TEST(CharacteristicCubic, ExcludedLocusFallback) {
  // 1 - 2k^2 - 2k tau = 0 with D > 0.
  double k = -1.0, t = (1 - 2 * k * k) / (2 * k);
  CubicRoots c = solve_characteristic_cubic(k, t);
  if (c.status == CubicStatus::Separated) {
    auto p = [&](double x) { return -x * x * x + (3 * k * k - t) * x + 2 * k * k * k + 2 * k * t - 1; };
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(p(c.e[j]), 0.0, 1e-9);
  }
}

TEST(OneParameterExp, Examples) {
  PseudoMatrix K = wilczynski_generator(0.3, -0.2);
  EXPECT_LT((one_parameter_exp(K, 0.0) - PseudoMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-14);

  const double c = 1.7;
  PseudoMatrix D = PseudoMatrix::Zero();
  D.diagonal() << -I * c, 2.0 * I * c, -I * c;
  EXPECT_LT((one_parameter_exp(D, 2 * kPi / c) - PseudoMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-12);

  PseudoMatrix K0 = wilczynski_generator(0, 0);
  EXPECT_LT((one_parameter_exp(K0, 1.0) - series_exp(K0, 1.0, 30)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(OneParameterExp, GroupLawProperty) {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> us(-10, 10), uk(-1.5, 1.5), ut(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    PseudoMatrix K = trial % 2 ? wilczynski_generator(uk(rng), ut(rng)) : test::random_algebra(rng, 0.3);
    double s = us(rng), t = us(rng);
    PseudoMatrix lhs = one_parameter_exp(K, s + t);
    PseudoMatrix Es = one_parameter_exp(K, s), Et = one_parameter_exp(K, t);
    // Non-compact flows grow exponentially; the product Es * Et cancels down
    // to lhs, so the attainable accuracy is relative to |Es| |Et|.
    double scale = std::max(1.0, Es.norm() * Et.norm());
    EXPECT_LT((lhs - Es * Et).cwiseAbs().maxCoeff(), 1e-9 * scale) << trial;
    double n = std::max(1.0, lhs.norm());
    EXPECT_LT(group_defect(lhs), 1e-9 * n * n * n);
  }
}

TEST(OneParameterExp, AgreesWithSeriesProperty) {
  std::mt19937 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    PseudoMatrix K = test::random_algebra(rng, 0.4);
    EXPECT_LT((one_parameter_exp(K, 0.8) - series_exp(K, 0.8, 40)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(OneParameterExp, DegenerateSpectrum) {
  // D = 0 at the cusp of the discriminant: kappa with 1 + 32 kappa^3 = 0, tau = -9 kappa^2.
  double k = -std::cbrt(1.0 / 32.0);
  PseudoMatrix K = wilczynski_generator(k, -9 * k * k);
  EXPECT_LT((one_parameter_exp(K, 2.5) - series_exp(K, 2.5, 80)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(OneParameterExp, RejectsNonAlgebra) {
  PseudoMatrix K = PseudoMatrix::Identity();
  try {
    one_parameter_exp(K, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlgebraViolation);
  }
}

TEST(OrthogonalComplement, Examples) {
  PseudoVector s = h_orthogonal_complement(E(1), E(2));
  EXPECT_LT(std::abs(s(1)) + std::abs(s(2)), 1e-12 * s.norm());
  s = h_orthogonal_complement(E(1), E(3));
  EXPECT_LT(std::abs(s(0)) + std::abs(s(2)), 1e-12 * s.norm());
  try {
    h_orthogonal_complement(E(1), 2.0 * I * E(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateSpan);
  }
}

TEST(OrthogonalComplement, TransversalLiftIsSpacelike) {
  SymmetricConfiguration cfg(test::second_34());
  for (double s : {0.0, 0.7, 2.1, 4.4}) {
    PseudoVector g = cfg.lift(s), g1 = cfg.lift(s, 1);
    PseudoVector S = h_orthogonal_complement(g, g1);
    EXPECT_LT(std::abs(herm_product(S, g)), 1e-10 * S.norm() * g.norm());
    EXPECT_LT(std::abs(herm_product(S, g1)), 1e-10 * S.norm() * g1.norm());
    EXPECT_EQ(causal_character(S), CausalCharacter::Spacelike);
  }
}

TEST(Discriminant, MatchesRootProductProperty) {
  // 50-point grid restricted to D > 0.
  int used = 0;
  for (int i = 0; i < 10 && used < 50; ++i)
    for (int j = 0; j < 10 && used < 50; ++j) {
      double k = -1.5 + 3.0 * i / 9.0, t = -5.0 + 8.0 * j / 9.0;
      double D = characteristic_discriminant(k, t);
      if (D <= 0) continue;
      CubicRoots c = solve_characteristic_cubic(k, t);
      ASSERT_EQ(c.status, CubicStatus::Separated);
      double prod = std::pow((c.e[0] - c.e[1]) * (c.e[0] - c.e[2]) * (c.e[1] - c.e[2]), 2);
      EXPECT_NEAR(prod / D, 1.0, 1e-8) << k << " " << t;
      ++used;
    }
  EXPECT_GE(used, 30);
}
