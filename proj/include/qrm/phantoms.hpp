#pragma once

#include <string>

#include "qrm/grid.hpp"

namespace qrm {

/// Exact initial conditions used by the test suite. All of them vanish
/// outside the unit support square SQ(1) = (0,1) x (0,1).
enum class Phantom { Zero, SineFull, SineShifted, DeltaPair };

std::string phantom_name(Phantom p);
Phantom phantom_from_name(const std::string& name);

/// sin(2 pi x1) sin(2 pi x2) on SQ(1), zero outside.
SpatialField sine_full(const SpaceTimeGrid& grid);

/// sin(pi/2 (x1 - 0.5)) sin(pi/2 (x2 - 0.5)) on the closed SQ(1), zero
/// outside. Discontinuous across the edge of SQ(1) by construction.
SpatialField sine_shifted(const SpaceTimeGrid& grid);

/// Two grid-point spikes of height 3/(4 h_x1 h_x2) at (0.4, 0.4) and
/// (0.7, 0.7); the pyramid interpolant of each spike has unit volume.
/// Throws NodeMisalignedError if the spike centers are not grid nodes.
SpatialField delta_pair(const SpaceTimeGrid& grid);

SpatialField make_phantom(Phantom p, const SpaceTimeGrid& grid);

} // namespace qrm
