#include "logsol/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace logsol {

Field gaussian_bump(const Grid &grid, std::array<double, 2> center, double amplitude,
                    double sigma) {
  Field u(grid);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      double d = grid.coordinate(i, a) - center[a];
      if (grid.periodic())
        d -= grid.box_length(a) * std::round(d / grid.box_length(a));
      r2 += d * d;
    }
    u[i] = amplitude * std::exp(-r2 * inv);
  }
  apply_boundary(u);
  return u;
}

Field random_smooth_field(const Grid &grid, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x5eedu};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int bumps = 1 + static_cast<int>(unit(rng) * 4.0) % 4;
  Field u(grid);
  for (int b = 0; b < bumps; ++b) {
    std::array<double, 2> center{0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) {
      // Keep centers 3 widths from a Dirichlet wall.
      const double margin = grid.periodic() ? 0.0 : std::min(4.5, 0.3 * grid.box_length(a));
      center[a] = grid.origin(a) + margin + unit(rng) * (grid.box_length(a) - 2.0 * margin);
    }
    const double amplitude = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.2 + 1.8 * unit(rng));
    const double sigma = 0.3 + 1.2 * unit(rng);
    u = u + gaussian_bump(grid, center, amplitude, sigma);
  }
  return u;
}

} // namespace logsol
