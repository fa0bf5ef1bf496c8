#pragma once

#include "logsol/coefficients.hpp"
#include "logsol/lattice.hpp"

namespace logsol {

/// Exponent of the p-Laplacian. The analysis covers 1 < p < N; the discrete
/// operators accept any p > 1 and regularize the flux weight when p < 2.
class PLapParams {
public:
  static constexpr double kRegularization = 1e-8;

  explicit PLapParams(double p);
  double p() const { return p_; }

private:
  double p_;
};

struct PLapBreakdown {
  double j = 0.0;               ///< J_p(u)
  double quad = 0.0;            ///< ∫|∇u|^p + (V + Q)|u|^p
  double logterm = 0.0;         ///< ∫Q|u|^p log|u|^p
  double q_mass = 0.0;          ///< ∫Q|u|^p
  double nehari_residual = 0.0; ///< ⟨J_p'(u), u⟩
};

PLapBreakdown plap_breakdown(const Field &u, const Coefficients &c, const PLapParams &pp);
double plap_energy(const Field &u, const Coefficients &c, const PLapParams &pp);
/// J_p(b) - J_p(a) in extended precision (see energy_difference).
double plap_energy_difference(const Field &a, const Field &b, const Coefficients &c,
                              const PLapParams &pp);

/// Exact gradient of the discrete J_p: edge fluxes |∇u|^{p-2} D u are
/// differenced back to the nodes, so ⟨plap_gradient(u), u⟩ reproduces the
/// Nehari residual by summation by parts.
Field plap_gradient(const Field &u, const Coefficients &c, const PLapParams &pp);

/// s* = exp(J_p(u)/∫Q|u|^p - 1/p).
double plap_nehari_scale(const Field &u, const Coefficients &c, const PLapParams &pp);
Field plap_nehari_project(const Field &u, const Coefficients &c, const PLapParams &pp);

} // namespace logsol
