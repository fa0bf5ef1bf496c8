#pragma once

// Independent reference computations used as test oracles. None of them
// share code with the library kernels.

#include "logsol/lattice.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace logsol::testing {

/// Correctly rounded sum by Shewchuk's nonoverlapping expansions (the
/// algorithm behind Python's math.fsum), independent of ExactSum.
inline double fsum(const std::vector<double> &xs) {
  std::vector<double> partials;
  for (double x : xs) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y))
        std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0)
        partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  double hi = 0.0;
  if (!partials.empty()) {
    std::size_t n = partials.size();
    hi = partials[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0)
        break;
    }
    // Half-way case: round-half-even needs a look at the next partial.
    if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi)
        hi = x;
    }
  }
  return hi;
}

/// Central finite-difference directional derivative of f at u along v.
inline double directional_derivative(const std::function<double(const Field &)> &f, const Field &u,
                                     const Field &v, double t) {
  return (f(u + t * v) - f(u - t * v)) / (2.0 * t);
}

/// Nodal values in plain double loops: ∑_i w f_i for the quadrature weight
/// w = volume / nodes, skipping Dirichlet boundary nodes.
inline double quadrature(const Field &f) {
  const Grid &g = f.grid();
  std::vector<double> xs;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!g.is_boundary_node(i))
      xs.push_back(f[i]);
  return fsum(xs) * g.volume() / static_cast<double>(g.size());
}

} // namespace logsol::testing
