#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace cr3 {

using Complex = std::complex<double>;
using PseudoVector = Eigen::Vector3cd;
using PseudoMatrix = Eigen::Matrix3cd;

// The Hermitian form of signature (2,1):
//   <z, w> = conj(z)^T h w,  h = [[0,0,i],[0,1,0],[-i,0,0]].
const PseudoMatrix& form_matrix();

Complex herm_product(const PseudoVector& z, const PseudoVector& w);

/// Residual of F^H h F = h and det F = 1, max-abs entry.
double group_defect(const PseudoMatrix& F);
bool is_group_element(const PseudoMatrix& F, double tol = 1e-9);

/// Residual of K^H h + h K = 0 and tr K = 0, max-abs entry.
double algebra_defect(const PseudoMatrix& K);
bool is_algebra_element(const PseudoMatrix& K, double tol = 1e-9);

/// Inverse of an element of SU(2,1): h F^H h.
PseudoMatrix group_inverse(const PseudoMatrix& F);

enum class CausalCharacter { Spacelike, Timelike, Lightlike };

/// tol is relative to the squared Euclidean norm of v.
CausalCharacter causal_character(const PseudoVector& v, double tol = 1e-10);
const char* to_string(CausalCharacter c);

/// Infinitesimal generator of the Wilczynski frame along a curve with
/// bending kappa and twist tau (right action, F' = F K).
PseudoMatrix wilczynski_generator(double kappa, double tau);

double characteristic_discriminant(double kappa, double tau);

enum class CubicStatus { Separated, NonSeparated };
enum class CubicBranch { Trigonometric, Fallback };

struct CubicRoots {
  CubicStatus status = CubicStatus::NonSeparated;
  CubicBranch branch = CubicBranch::Fallback;
  double discriminant = 0.0;
  // Ascending. Only the first `count` entries are meaningful; count is 3
  // exactly when status is Separated.
  std::array<double, 3> e{};
  int count = 0;
};

/// Real roots of -t^3 + (3k^2 - tau) t + 2k^3 + 2k tau - 1, which are the
/// eigenvalues of the Hamiltonian i*K(kappa, tau).
CubicRoots solve_characteristic_cubic(double kappa, double tau);

/// exp(s K) for K in su(2,1). Throws AlgebraViolation.
PseudoMatrix one_parameter_exp(const PseudoMatrix& K, double s);

/// Nonzero S with <S,u> = <S,v> = 0. Throws DegenerateSpan when u, v are
/// (numerically) parallel.
PseudoVector h_orthogonal_complement(const PseudoVector& u, const PseudoVector& v);

/// Complex 3x3 determinant of the columns (a, b, c).
Complex det3(const PseudoVector& a, const PseudoVector& b, const PseudoVector& c);

}  // namespace cr3
