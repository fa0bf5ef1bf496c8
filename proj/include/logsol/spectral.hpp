#pragma once

#include "logsol/lattice.hpp"

#include <array>

namespace logsol {

/// Derivatives of the trigonometric interpolant of u along each axis, sampled
/// half a cell forward of every node (where forward differences live too).
/// The node sequence is read as one period of the box; on Dirichlet grids the
/// boundary node and the implicit wall are both zero, so the same holds there.
/// Exact for trigonometric polynomials below the Nyquist frequency. The
/// Nyquist mode, which a node-centred derivative would lose entirely, peaks
/// at the half cells, so its energy is overcounted rather than dropped.
std::array<Field, 2> staggered_derivatives(const Field &u);

/// ∫|∇u|² of the interpolant, by midpoint quadrature of staggered_derivatives.
double spectral_gradient_sq(const Field &u);

} // namespace logsol
