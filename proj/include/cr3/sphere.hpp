#pragma once

#include <Eigen/Dense>

#include "cr3/core.hpp"

namespace cr3 {

struct HeisenbergPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static HeisenbergPoint from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

/// A point of the hyperquadric S: a null line in C^{2,1}, stored through a
/// unit-norm representative whose first nonzero entry is real positive.
class SpherePoint {
 public:
  /// Throws NotNull when |<v,v>| > tol * |v|^2.
  static SpherePoint from_vector(const PseudoVector& v, double tol = 1e-10);

  const PseudoVector& representative() const { return rep_; }
  bool same_line(const SpherePoint& other, double tol = 1e-10) const;

 private:
  explicit SpherePoint(const PseudoVector& v) : rep_(v) {}
  PseudoVector rep_;
};

/// [1, x+iy, z + i(x^2+y^2)/2].
PseudoVector chart_lift(const HeisenbergPoint& p);
SpherePoint heisenberg_chart(const HeisenbergPoint& p);

/// (Re z2/z1, Im z2/z1, Re z3/z1). Throws PointAtInfinity when z1 vanishes.
HeisenbergPoint heisenberg_projection(const PseudoVector& v);
HeisenbergPoint heisenberg_projection(const SpherePoint& p);

/// Contact form dz + x dy - y dx evaluated on the tangent vector v at p.
double contact_form(const HeisenbergPoint& p, const Eigen::Vector3d& v);

/// Section of G -> S over the Heisenberg chart, with first column v / v1.
PseudoMatrix heisenberg_section(const PseudoVector& v);

struct CliffordAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
};

/// Element R(theta1, theta2) of the standard maximal torus T^2 in G.
PseudoMatrix torus_rotation(const CliffordAngles& angles);

/// Point of the standard Heisenberg cyclide with parameter rho in (0, sqrt 2):
/// rotation by theta2 about the z-axis of eta_rho(theta1).
HeisenbergPoint cyclide_point(double rho, const CliffordAngles& angles);

/// Clifford parameter of the torus orbit through the null line [v]: 0 on the
/// z-axis, sqrt 2 on the Clifford circle.
double cyclide_parameter(const PseudoVector& v);

}  // namespace cr3
