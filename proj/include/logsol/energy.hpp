#pragma once

#include "logsol/coefficients.hpp"
#include "logsol/lattice.hpp"

#include <cmath>

namespace logsol {

/// Splitting threshold δ for F1/F2. F1 is convex exactly when δ <= e^{-3/2}.
class SplitParams {
public:
  static constexpr double kConvexityLimit = 0.22313016014842982; // e^{-3/2}
  static double default_delta() { return std::exp(-2.0); }

  SplitParams() : SplitParams(default_delta()) {}
  explicit SplitParams(double delta);

  double delta() const { return delta_; }

private:
  double delta_;
};

enum class Branch { Inner, Outer };

/// s^2 log s^2, continuously extended by 0 at s = 0.
inline double s2_log_s2(double s) {
  return s == 0.0 ? 0.0 : s * s * (2.0 * std::log(std::abs(s)));
}

// Convex part: -s^2 log(s^2)/2 inside |s| < δ, quadratic continuation outside.
double f1_eval(double s, const SplitParams &p);
double f1_prime(double s, const SplitParams &p);
// Smooth part; vanishes on |s| <= δ.
double f2_eval(double s, const SplitParams &p);
double f2_prime(double s, const SplitParams &p);

// Force one branch regardless of |s| (used to check C^1 matching at δ).
double f1_eval(double s, const SplitParams &p, Branch b);
double f1_prime(double s, const SplitParams &p, Branch b);
double f2_eval(double s, const SplitParams &p, Branch b);
double f2_prime(double s, const SplitParams &p, Branch b);

struct EnergyBreakdown {
  double j = 0.0;               ///< J(u)
  double phi = 0.0;             ///< Φ(u) = ‖u‖²/2 - ∫Q F2(u)
  double psi = 0.0;             ///< Ψ(u) = ∫Q F1(u) >= 0
  double quad = 0.0;            ///< ‖u‖² (energy norm)
  double logterm = 0.0;         ///< ∫Q u² log u²
  double nehari_residual = 0.0; ///< ⟨J'(u), u⟩
  double q_mass = 0.0;          ///< ∫Q u²
};

EnergyBreakdown energy(const Field &u, const Coefficients &c,
                       const SplitParams &p = SplitParams());

/// J(b) - J(a), accumulated node by node in extended precision so that
/// differences far below the rounding level of J itself are resolved.
double energy_difference(const Field &a, const Field &b, const Coefficients &c);

/// Strong-form residual -Δ_h u + V u - Q u log u² (zero on Dirichlet boundary).
Field gradient_field(const Field &u, const Coefficients &c);

/// RHS - LHS of the logarithmic Sobolev inequality
///   ∫u² log u² <= (a²/π)‖∇u‖² + (log‖u‖² - N(1 + log a))‖u‖².
/// ‖∇u‖² is taken from the trigonometric interpolant (spectral_gradient_sq):
/// forward differences undershoot it by O(h²), enough to push the slack of
/// near-extremal Gaussians below zero.
/// Throws ZeroField for u ≡ 0 and InvalidArgument for a <= 0.
double logsob_slack(const Field &u, double a);

/// Right-hand side of the inequality obtained by substituting √Q u:
///   (2a²/π)(∫Q|∇u|² + ∫u²|∇√Q|²) + (log∫Qu² - N(1 + log a))∫Qu².
/// Requires 2a² max Q / π <= 1/2 so the gradient part can be absorbed.
double weighted_logsob_bound(const Field &u, const Coefficients &c, double a);
/// ∫Q u² log(Q u²), the quantity bounded by weighted_logsob_bound.
double weighted_logsob_lhs(const Field &u, const Coefficients &c);

} // namespace logsol
