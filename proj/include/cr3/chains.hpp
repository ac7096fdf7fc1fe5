#pragma once

#include <cstddef>

#include "cr3/sampling.hpp"

namespace cr3 {

/// A chain is the intersection of S with a complex line, determined by the
/// spacelike h-normal of that line.
struct ChainSpec {
  PseudoVector normal;
};

/// Heisenberg ellipse of the chain with the given normal, sampled on [0, 2 pi).
/// Throws NotSpacelike for a non-spacelike normal and ThroughInfinity when
/// the chain is a vertical line.
SampledCurve chain_from_normal(const ChainSpec& spec, std::size_t samples);

/// Rate c1 of the chain through p tangent to v; the chain has period pi/|c1|.
double chain_through_rate(const HeisenbergPoint& p, const Eigen::Vector3d& v);

/// Chain through p with velocity v at parameter 0. Throws LegendrianDirection
/// when v lies in the contact plane at p.
SampledCurve chain_through(const HeisenbergPoint& p, const Eigen::Vector3d& v, std::size_t samples);

}  // namespace cr3
