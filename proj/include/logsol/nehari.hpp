#pragma once

#include "logsol/energy.hpp"

#include <utility>
#include <vector>

namespace logsol {

/// Energy along the ray s -> s u.
struct FiberReport {
  double s_star = 0.0;    ///< unique maximizer of the fiber map
  double j_at_star = 0.0; ///< J(s* u)
  std::vector<std::pair<double, double>> phi_samples;
};

/// φ(s) = J(u) s² - s² log(s) ∫Q u². Equals energy(s u).j.
double fiber_value(const Field &u, const Coefficients &c, const SplitParams &p, double s);

/// Closed-form Nehari scale s* = exp(J(u)/∫Qu² - 1/2); s* u lies on the Nehari set.
double nehari_scale(const Field &u, const Coefficients &c, const SplitParams &p = SplitParams());

/// s* u.
Field nehari_project(const Field &u, const Coefficients &c, const SplitParams &p = SplitParams());

/// s* plus φ sampled at `samples` log-spaced scales in [s*/span, s* span].
FiberReport fiber_report(const Field &u, const Coefficients &c, const SplitParams &p,
                         int samples = 41, double span = 10.0);

} // namespace logsol
