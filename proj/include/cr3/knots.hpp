#pragma once

#include <cstddef>
#include <functional>

#include "cr3/curves.hpp"
#include "cr3/sampling.hpp"

namespace cr3 {

struct MaslovResult {
  int index = 0;
  double raw = 0.0;        // winding of chi over the lift period, before rounding
  int lift_periods = 1;    // curve periods per lift period
  double min_chi = 0.0;    // min |chi| / max |chi|
};

/// Maslov index -(1/2pi) * (phase change of chi = W_1 - i W_3) over the
/// minimal period of the Wilczynski lift of a closed curve. Throws
/// ChiVanishes, NonIntegerWinding.
MaslovResult maslov_numeric(const SampledCurve& closed, double chi_tol = 1e-8);

struct Monodromy {
  Complex epsilon = 1.0;
  int spin_denominator = 1;  // 1 or 3
  int anomaly_thirds = 0;    // anomaly = 2 pi anomaly_thirds / 3
  double anomaly = 0.0;      // arg epsilon in [0, 2 pi)
  double spread = 0.0;       // disagreement between components
};

/// Cube-root monodromy of the Wilczynski lift of a closed sampled curve.
Monodromy monodromy(const SampledCurve& closed, double tol = 1e-7);
/// Same from an evaluable Wilczynski lift: epsilon = W(T) / W(0)
/// componentwise. Throws NotCubeRoot.
Monodromy monodromy(const std::function<PseudoVector(double)>& lift, double period,
                    double tol = 1e-7);

/// Size measures of a closed Heisenberg curve: the largest distance between
/// samples and the smallest distance between distinct strands.
struct StrandGeometry {
  double diameter = 0.0;
  double separation = 0.0;
};
StrandGeometry strand_geometry(const SampledCurve& heisenberg);

/// min(0.05 diameter, 0.2 separation).
double default_epsilon(const SampledCurve& heisenberg);

/// gamma + eps (1, 0, y) / sqrt(1 + y^2). Throws SelfIntersecting.
SampledCurve contact_pushoff(const SampledCurve& heisenberg, double epsilon);
/// gamma + eps N / |N| with N the CR normal of the trihedron.
SampledCurve cr_pushoff(const WilczynskiData& data, double epsilon);

struct LinkingResult {
  double raw = 0.0;
  long rounded = 0;
  double residual = 0.0;
  std::size_t quadrature_points = 0;
  double epsilon = 0.0;
  double min_distance = 0.0;
  bool valid() const { return residual < 0.1; }
};

/// (1/4pi) times the Gauss double integral over both closed curves, by the
/// trapezoid rule on arc-length grids of n points each. Parallel over
/// CR3_WORKERS threads with a fixed reduction order. Throws CurvesIntersect.
LinkingResult gauss_linking(const SampledCurve& a, const SampledCurve& b, std::size_t n = 1024);

struct LinkingEstimate {
  LinkingResult at_epsilon;
  LinkingResult at_half;
  bool stable() const { return at_epsilon.rounded == at_half.rounded; }
};

/// Linking of a closed transversal curve with its contact push-off at eps and
/// eps/2 (eps <= 0 picks default_epsilon). Throws Unstable.
LinkingEstimate bennequin_estimate(const SampledCurve& curve, double epsilon = 0.0,
                                   std::size_t n = 1024);
/// Same with the CR push-off.
LinkingEstimate self_linking_estimate(const WilczynskiData& data, double epsilon = 0.0,
                                      std::size_t n = 1024);

/// Both sweeps without the stability gate.
LinkingEstimate bennequin_sweep(const SampledCurve& curve, double epsilon, std::size_t n);
LinkingEstimate self_linking_sweep(const WilczynskiData& data, double epsilon, std::size_t n);

/// The base curve of analyzed data in Heisenberg coordinates.
SampledCurve heisenberg_curve(const WilczynskiData& data);

/// Worker count from CR3_WORKERS, else the hardware concurrency.
unsigned worker_count();

}  // namespace cr3
