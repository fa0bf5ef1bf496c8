#pragma once

#include "logsol/lattice.hpp"

#include <array>
#include <cstdint>

namespace logsol {

/// amplitude * exp(-|x - center|² / (2 sigma²)), nearest image on periodic grids.
Field gaussian_bump(const Grid &grid, std::array<double, 2> center, double amplitude,
                    double sigma);

/// Seeded sum of 1..4 Gaussian bumps with random centers, signs and widths in
/// [0.3, 1.5]; smooth and localized on boxes a few units wide.
Field random_smooth_field(const Grid &grid, std::uint64_t seed, std::uint64_t index);

} // namespace logsol
