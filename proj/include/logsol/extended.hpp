#pragma once

// Extended-precision node densities for energy differences. Near a critical
// point successive energies agree to the last few bits of a double, so the
// line search compares them through these instead.

#include "logsol/exact_sum.hpp"
#include "logsol/lattice.hpp"

#include <span>

namespace logsol::ext {

using real = long double;

/// Adds v exactly, as the unevaluated pair hi + lo.
inline void add(ExactSum &acc, real v) {
  const double hi = static_cast<double>(v);
  acc.add(hi);
  acc.add(static_cast<double>(v - hi));
}

/// Squared forward-difference gradient at a node, in extended precision.
inline real gradient_sq_at(const Grid &grid, std::span<const double> u, std::size_t idx) {
  const int i0 = grid.axis_index(idx, 0);
  const int i1 = grid.axis_index(idx, 1);
  const real here = grid.read(u, i0, i1);
  const real d0 = (grid.read(u, i0 + 1, i1) - here) / static_cast<real>(grid.spacing(0));
  real g = d0 * d0;
  if (grid.dim() == 2) {
    const real d1 = (grid.read(u, i0, i1 + 1) - here) / static_cast<real>(grid.spacing(1));
    g += d1 * d1;
  }
  return g;
}

} // namespace logsol::ext
