#pragma once

// Serial reference kernels. They loop over (i0, i1) explicitly with no OpenMP,
// sum with ExactSum in index order, and exist to pin down the parallel
// kernels in tests and benchmarks.

#include "logsol/coefficients.hpp"
#include "logsol/energy.hpp"
#include "logsol/plap.hpp"

namespace logsol::reference {

double integrate(const Field &f);
Field laplacian_apply(const Field &u);
double h1_norm_sq(const Field &u, const Coefficients &c);
EnergyBreakdown energy(const Field &u, const Coefficients &c, const SplitParams &p);
Field gradient_field(const Field &u, const Coefficients &c);
double plap_energy(const Field &u, const Coefficients &c, const PLapParams &pp);
Field plap_gradient(const Field &u, const Coefficients &c, const PLapParams &pp);

} // namespace logsol::reference
