#pragma once

#include <cstddef>
#include <vector>

#include "cr3/chains.hpp"
#include "cr3/sampling.hpp"

namespace cr3 {

/// True when Im<Gamma, Gamma'> stays away from zero (relative to
/// |Gamma||Gamma'|) at every sample.
bool transversality_check(const SampledCurve& curve, double tol = 1e-10);

/// +1 when the strain density is positive, -1 when negative. Throws
/// NonTransversal.
int orientation(const SampledCurve& curve, double tol = 1e-10);

/// Infinitesimal strain i / <W, W'> of the Wilczynski lift W, evaluated at the
/// samples. Independent of the chosen lift. Throws NonTransversal.
std::vector<double> strain_density(const SampledCurve& curve, double tol = 1e-10);

/// Normalized |det(Gamma, Gamma', Gamma'')| at each sample.
std::vector<double> inflection_measure(const SampledCurve& curve);

/// Parameters of samples whose normalized det falls below tol_det.
std::vector<double> inflection_scan(const SampledCurve& curve, double tol_det = 1e-6);

struct WNormalized {
  SampledCurve curve;
  // For a closed curve: W(s + T) = end_mismatch * W(s), a cube root of unity.
  Complex end_mismatch = 1.0;
};

/// Rescales the lift so that det(W, W', W'') = -1, following a continuous
/// branch of the cube root. Throws InflectionPresent, NotCubeRoot.
WNormalized normalize_wilczynski(const SampledCurve& curve, double tol_det = 1e-6);

/// Reparametrizes by accumulated strain and returns the Wilczynski lift in the
/// new parameter, so <W, W'> = i. A negatively oriented curve is reversed
/// first. samples == 0 keeps the sample count.
SampledCurve natural_reparametrize(const SampledCurve& curve, std::size_t samples = 0);

struct BendingTwist {
  std::vector<double> kappa;
  std::vector<double> tau;
};

/// Throws NotNatural unless the curve is a natural Wilczynski lift within tol.
BendingTwist bending_twist(const SampledCurve& natural, double tol = 1e-6);

struct WilczynskiData {
  SampledCurve curve;  // natural Wilczynski lift
  std::vector<double> kappa;
  std::vector<double> tau;
  std::vector<double> kappa_prime;
  std::vector<PseudoMatrix> frames;
  Complex end_mismatch = 1.0;
  int orientation = 1;
};

/// Wilczynski frames (Gamma, Gamma'' - 2i k Gamma' - (tau + k^2 + i k') Gamma,
/// Gamma' - i k Gamma) along a natural Wilczynski lift.
WilczynskiData wilczynski_frame(const SampledCurve& natural, double tol = 1e-6);

/// Full chain: lift, transversality, inflection scan, normalization, natural
/// reparametrization and frames. Throws NonTransversal or InflectionPresent.
WilczynskiData analyze_curve(const SampledCurve& curve, std::size_t samples = 0);

/// Chain osculating the curve at parameter s.
ChainSpec osculating_chain(const SampledCurve& curve, double s);

/// CR trihedron in Heisenberg coordinates: unit transversal T (the velocity
/// in the natural parameter), CR normal N and J N spanning the contact plane.
struct Trihedron {
  HeisenbergPoint point;
  Eigen::Vector3d T;
  Eigen::Vector3d N;
  Eigen::Vector3d JN;
};

Trihedron cr_trihedron(const WilczynskiData& data, std::size_t index);

}  // namespace cr3
