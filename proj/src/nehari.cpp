#include "logsol/nehari.hpp"

#include "logsol/errors.hpp"

#include <cmath>

namespace logsol {

namespace {

void require_nonzero(const Field &u) {
  if (max_abs(u) == 0.0)
    throw ZeroField();
}

double scale_from(const EnergyBreakdown &e) {
  if (!(e.q_mass > 0.0))
    throw ZeroField();
  return std::exp(e.j / e.q_mass - 0.5);
}

} // namespace

double fiber_value(const Field &u, const Coefficients &c, const SplitParams &p, double s) {
  if (!(s > 0.0))
    throw NonpositiveScale(s);
  require_nonzero(u);
  const EnergyBreakdown e = energy(u, c, p);
  return e.j * s * s - s * s * std::log(s) * e.q_mass;
}

double nehari_scale(const Field &u, const Coefficients &c, const SplitParams &p) {
  require_nonzero(u);
  return scale_from(energy(u, c, p));
}

Field nehari_project(const Field &u, const Coefficients &c, const SplitParams &p) {
  return nehari_scale(u, c, p) * u;
}

FiberReport fiber_report(const Field &u, const Coefficients &c, const SplitParams &p,
                         int samples, double span) {
  require_nonzero(u);
  const EnergyBreakdown e = energy(u, c, p);
  FiberReport r;
  r.s_star = scale_from(e);
  auto phi = [&](double s) { return e.j * s * s - s * s * std::log(s) * e.q_mass; };
  r.j_at_star = phi(r.s_star);
  const double lo = std::log(r.s_star / span);
  const double hi = std::log(r.s_star * span);
  for (int k = 0; k < samples; ++k) {
    const double s = std::exp(lo + (hi - lo) * k / (samples > 1 ? samples - 1 : 1));
    r.phi_samples.emplace_back(s, phi(s));
  }
  return r;
}

} // namespace logsol
