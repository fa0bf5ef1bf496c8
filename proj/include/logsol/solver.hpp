#pragma once

#include "logsol/energy.hpp"
#include "logsol/plap.hpp"
#include "logsol/riesz.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace logsol {

enum class Preconditioner { None, H1 };

struct SolverConfig {
  int max_iters = 4000;
  double tol_residual = 1e-8; ///< ‖gradient‖₂ / ‖u‖ at convergence
  double step_init = 1.0;
  double armijo_c = 1e-4;
  double armijo_shrink = 0.5;
  std::uint64_t seed = 1;
  int n_starts = 8;
  double dedup_tol = 1e-2;
  Preconditioner preconditioner = Preconditioner::H1;
  /// Curvature pairs kept for the quasi-Newton direction; 0 gives plain
  /// preconditioned gradient descent.
  int memory = 8;
  // Multistart initializers.
  int max_bumps = 3;
  double jitter = 0.25;
  bool symmetric_starts = true;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

enum class SignPattern { Positive, Negative, SignChanging };
enum class Termination { Converged, MaxIterations, LineSearchStalled, NonFiniteEnergy };

std::string to_string(SignPattern s);
std::string to_string(Termination t);

struct SolverReport {
  int iterations = 0;
  std::vector<double> energy_history; ///< J after the initial projection and each accepted step
  /// Extended-precision J(u_{k+1}) - J(u_k) of each accepted step; all negative.
  std::vector<double> energy_decrease;
  double final_residual = 0.0;
  double energy = 0.0;
  SignPattern sign_pattern = SignPattern::Positive;
  bool converged = false;
  Termination termination = Termination::MaxIterations;
};

struct Solution {
  Field u;
  SolverReport report;
};

/// Values below this magnitude do not count toward the sign pattern.
inline constexpr double kSignThreshold = 1e-10;
SignPattern sign_pattern(const Field &u);

/// Translation-plus-sign symmetry u(x + t) = sign * u(x) on a periodic grid,
/// t given in unit lengths. A zero shift means no constraint.
struct Symmetry {
  std::array<int, 2> shift{0, 0};
  int sign = 1;

  bool trivial() const { return shift[0] == 0 && shift[1] == 0; }
  std::string label() const;
  bool operator==(const Symmetry &) const = default;
};

/// Orthogonal projection onto the fields obeying `s` (orbit averaging). The
/// result satisfies the symmetry bit for bit.
Field symmetrize(const Field &u, const Symmetry &s);

/// Functional interface the descent engine drives; both the logarithmic and
/// the p-Laplacian problems implement it.
class Objective {
public:
  virtual ~Objective() = default;
  virtual const Coefficients &coefficients() const = 0;
  virtual double value(const Field &u) const = 0;
  /// value(to) - value(from), resolved below the rounding level of value().
  virtual double difference(const Field &from, const Field &to) const = 0;
  /// L² (strong-form) gradient.
  virtual Field gradient(const Field &u) const = 0;
  /// Ray projection onto the Nehari set.
  virtual Field project(const Field &u) const = 0;
};

class LogObjective final : public Objective {
public:
  LogObjective(const Coefficients &c, SplitParams p) : c_(c), p_(p) {}
  const Coefficients &coefficients() const override { return c_; }
  double value(const Field &u) const override;
  double difference(const Field &from, const Field &to) const override;
  Field gradient(const Field &u) const override;
  Field project(const Field &u) const override;

private:
  const Coefficients &c_;
  SplitParams p_;
};

class PLapObjective final : public Objective {
public:
  PLapObjective(const Coefficients &c, PLapParams pp) : c_(c), pp_(pp) {}
  const Coefficients &coefficients() const override { return c_; }
  double value(const Field &u) const override;
  double difference(const Field &from, const Field &to) const override;
  Field gradient(const Field &u) const override;
  Field project(const Field &u) const override;

private:
  const Coefficients &c_;
  PLapParams pp_;
};

/// Nehari-projected descent with Armijo backtracking:
///   u <- project(u - τ d),  d = H g
/// H is the energy-norm Riesz map R (or the identity), refined by limited
/// memory BFGS updates when cfg.memory > 0. Every accepted step strictly
/// decreases J. Throws ZeroField when u0 ≡ 0.
Solution descend(const Field &u0, const Objective &objective, const SolverConfig &cfg,
                 const RieszMap *riesz = nullptr, const Symmetry &symmetry = {});
/// Convenience overload for the logarithmic problem.
Solution descend(const Field &u0, const Coefficients &c, const SplitParams &p,
                 const SolverConfig &cfg);

/// Per-solution diagnostics of the discrete weak-solution contract.
struct SolutionCheck {
  double relative_residual = 0.0; ///< ‖gradient_field‖₂ / ‖u‖
  double nehari_relative = 0.0;   ///< |⟨J'(u),u⟩| / ‖u‖²
  double level_relative = 0.0;    ///< |J - ∫Qu²/2| / |J|
};
SolutionCheck check_solution(const Field &u, const Coefficients &c,
                             const SplitParams &p = SplitParams());

/// J(u) = J(u⁺) + J(u⁻) + crossing, where crossing = ∫ D u⁺ · D u⁻ collects
/// the forward-difference edges across which u changes sign (zero in the
/// continuum, O(h) on the grid).
struct SignSplit {
  double j = 0.0;
  double j_plus = 0.0;
  double j_minus = 0.0;
  double crossing = 0.0;
};
SignSplit sign_split(const Field &u, const Coefficients &c, const SplitParams &p = SplitParams());

/// Exact solution for constant coefficients: exp(a_g) exp(-b_g |x - x_c|²).
struct GaussonParams {
  double amplitude_exponent; ///< (Q N + V) / (2Q)
  double width;              ///< Q / 2
};
GaussonParams gausson_params(double v0, double q0, int dim);

/// Samples the Gausson centered in the box. Throws BoxTooSmall unless its value
/// at distance L/2 from the center is below 1e-12 of the peak on every axis.
Field gausson(double v0, double q0, const Grid &grid);

/// min over integer translations k and signs ± of ‖u1 ∓ shift(u2, k)‖₂.
/// `step_cells` > 0 replaces the unit translation step by that many cells.
double orbit_distance(const Field &u1, const Field &u2, int step_cells = 0);

struct StartRecord {
  std::uint64_t index = 0;
  Symmetry symmetry;
  int bumps = 0;
  bool converged = false;
  double energy = 0.0;
  int iterations = 0;
  int class_index = -1; ///< position in MultistartResult::solutions, -1 if discarded
};

struct MultistartResult {
  std::vector<Solution> solutions; ///< orbit-distinct, energy ascending
  std::vector<StartRecord> starts;
};

/// Symmetry classes the multistart cycles through: the trivial one first, then
/// every proper integer period P of axis 0 with sign +1, and sign -1 when the
/// box holds an even number of periods.
std::vector<Symmetry> symmetry_classes(const Grid &grid);

/// Seeded random initializer: 1..max_bumps Gaussian bumps on the unit lattice
/// plus jitter, random signs, then symmetrized.
Field random_initializer(const Coefficients &c, const SolverConfig &cfg, std::uint64_t start,
                         const Symmetry &symmetry, int *bumps_out = nullptr);

/// Runs descend from cfg.n_starts initializers, drops non-converged runs and
/// merges runs within cfg.dedup_tol in orbit distance. `threads` <= 0 uses the
/// OpenMP default; each run is single threaded and deterministic.
MultistartResult multistart(const Coefficients &c, const SplitParams &p, const SolverConfig &cfg,
                            int threads = 0);

} // namespace logsol
