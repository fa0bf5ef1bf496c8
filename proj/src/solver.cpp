#include "logsol/solver.hpp"

#include "logsol/errors.hpp"
#include "logsol/nehari.hpp"
#include "logsol/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace logsol {

void SolverConfig::validate() const {
  auto fail = [](const std::string &what) { throw InvalidArgument("solver config: " + what); };
  if (max_iters <= 0)
    fail("max_iters must be positive");
  if (!(tol_residual > 0.0))
    fail("tol_residual must be positive");
  if (!(step_init > 0.0))
    fail("step_init must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    fail("armijo_c must lie in (0, 1)");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
    fail("armijo_shrink must lie in (0, 1)");
  if (n_starts <= 0)
    fail("n_starts must be positive");
  if (!(dedup_tol > 0.0))
    fail("dedup_tol must be positive");
  if (memory < 0)
    fail("memory must be non-negative");
  if (max_bumps <= 0)
    fail("max_bumps must be positive");
  if (!(jitter >= 0.0 && jitter < 0.5))
    fail("jitter must lie in [0, 0.5)");
}

std::string to_string(SignPattern s) {
  switch (s) {
  case SignPattern::Positive:
    return "positive";
  case SignPattern::Negative:
    return "negative";
  case SignPattern::SignChanging:
    return "sign-changing";
  }
  return "unknown";
}

std::string to_string(Termination t) {
  switch (t) {
  case Termination::Converged:
    return "converged";
  case Termination::MaxIterations:
    return "max-iterations";
  case Termination::LineSearchStalled:
    return "line-search-stalled";
  case Termination::NonFiniteEnergy:
    return "non-finite-energy";
  }
  return "unknown";
}

SignPattern sign_pattern(const Field &u) {
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u.grid().is_boundary_node(i))
      continue;
    pos = pos || u[i] > kSignThreshold;
    neg = neg || u[i] < -kSignThreshold;
  }
  if (pos && neg)
    return SignPattern::SignChanging;
  return neg ? SignPattern::Negative : SignPattern::Positive;
}

std::string Symmetry::label() const {
  if (trivial())
    return "none";
  std::ostringstream s;
  s << (sign > 0 ? "periodic(" : "antiperiodic(") << shift[0];
  if (shift[1] != 0)
    s << "," << shift[1];
  s << ")";
  return s.str();
}

Field symmetrize(const Field &u, const Symmetry &s) {
  if (s.trivial())
    return u;
  const Grid &g = u.grid();
  if (!g.periodic())
    throw OrbitUndefined();
  const int t0 = s.shift[0] * g.cells_per_unit(0);
  const int t1 = g.dim() == 2 ? s.shift[1] * g.cells_per_unit(1) : 0;

  Field out(g);
  std::vector<char> done(g.size(), 0);
  std::vector<std::size_t> orbit;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (done[start])
      continue;
    // Walk the orbit start, start + t, start + 2t, ... in a fixed order.
    orbit.clear();
    int i0 = g.axis_index(start, 0), i1 = g.axis_index(start, 1);
    std::size_t idx = start;
    do {
      orbit.push_back(idx);
      done[idx] = 1;
      i0 = (i0 + t0) % g.cells(0);
      if (g.dim() == 2)
        i1 = (i1 + t1) % g.cells(1);
      idx = g.index(i0, i1);
    } while (idx != start);
    if (s.sign < 0 && orbit.size() % 2 != 0)
      throw InvalidArgument("antiperiodic symmetry needs an even orbit length");

    ExactSum acc;
    double sign = 1.0;
    for (std::size_t k : orbit) {
      acc.add(sign * u[k]);
      sign *= s.sign;
    }
    const double mean = acc.value() / static_cast<double>(orbit.size());
    sign = 1.0;
    for (std::size_t k : orbit) {
      out[k] = sign * mean;
      sign *= s.sign;
    }
  }
  return out;
}

double LogObjective::value(const Field &u) const { return energy(u, c_, p_).j; }
double LogObjective::difference(const Field &from, const Field &to) const {
  return energy_difference(from, to, c_);
}
Field LogObjective::gradient(const Field &u) const { return gradient_field(u, c_); }
Field LogObjective::project(const Field &u) const { return nehari_project(u, c_, p_); }

double PLapObjective::value(const Field &u) const { return plap_energy(u, c_, pp_); }
double PLapObjective::difference(const Field &from, const Field &to) const {
  return plap_energy_difference(from, to, c_, pp_);
}
Field PLapObjective::gradient(const Field &u) const { return plap_gradient(u, c_, pp_); }
Field PLapObjective::project(const Field &u) const { return plap_nehari_project(u, c_, pp_); }

namespace {

double relative_residual(const Field &g, const Field &u, const Coefficients &c) {
  return l2_norm(g) / std::sqrt(h1_norm_sq(u, c));
}

// Limited-memory BFGS inverse-Hessian action in the L² inner product, seeded
// with the (symmetrized) Riesz map.
class QuasiNewton {
public:
  QuasiNewton(int memory, const RieszMap *riesz, const Symmetry &symmetry)
      : memory_(static_cast<std::size_t>(memory)), riesz_(riesz), symmetry_(symmetry) {}

  void reset() { pairs_.clear(); }

  void update(const Field &s, const Field &y) {
    if (memory_ == 0)
      return;
    const double sy = inner(s, y);
    // Skip pairs without positive curvature (the projection can bend steps).
    if (!(sy > 1e-12 * std::sqrt(inner(s, s) * inner(y, y))))
      return;
    if (pairs_.size() == memory_)
      pairs_.erase(pairs_.begin());
    pairs_.push_back({s, y, 1.0 / sy});
  }

  Field direction(const Field &g) const {
    Field q = g;
    std::vector<double> alpha(pairs_.size());
    for (std::size_t k = pairs_.size(); k-- > 0;) {
      alpha[k] = pairs_[k].rho * inner(pairs_[k].s, q);
      q = q - alpha[k] * pairs_[k].y;
    }
    Field r = base(q);
    if (!pairs_.empty()) {
      const Pair &last = pairs_.back();
      r = (1.0 / (last.rho * inner(last.y, base(last.y)))) * r;
    }
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      const double beta = pairs_[k].rho * inner(pairs_[k].y, r);
      r = r + (alpha[k] - beta) * pairs_[k].s;
    }
    return symmetrize(r, symmetry_);
  }

  Field base(const Field &g) const {
    return riesz_ != nullptr ? symmetrize(riesz_->apply_inverse(g), symmetry_) : g;
  }

  bool active() const { return memory_ > 0; }

private:
  struct Pair {
    Field s, y;
    double rho;
  };
  std::size_t memory_;
  const RieszMap *riesz_;
  Symmetry symmetry_;
  std::vector<Pair> pairs_;
};

} // namespace

Solution descend(const Field &u0, const Objective &objective, const SolverConfig &cfg,
                 const RieszMap *riesz, const Symmetry &symmetry) {
  cfg.validate();
  const Coefficients &c = objective.coefficients();
  require_same_grid(u0.grid(), c.grid());
  Field start = symmetrize(u0, symmetry);
  apply_boundary(start);
  if (max_abs(start) == 0.0)
    throw ZeroField();

  SolverReport report;
  Field u = objective.project(start);
  double j = objective.value(u);
  if (!std::isfinite(j) || !all_finite(u)) {
    report.termination = Termination::NonFiniteEnergy;
    report.energy = j;
    report.sign_pattern = sign_pattern(u);
    return {std::move(u), std::move(report)};
  }
  report.energy_history.push_back(j);

  QuasiNewton qn(cfg.memory, riesz, symmetry);
  const double min_step = cfg.step_init * 1e-16;
  double step = cfg.step_init;
  Field g = objective.gradient(u);
  int it = 0;
  for (;; ++it) {
    report.final_residual = relative_residual(g, u, c);
    if (report.final_residual <= cfg.tol_residual) {
      report.converged = true;
      report.termination = Termination::Converged;
      break;
    }
    if (it >= cfg.max_iters) {
      report.termination = Termination::MaxIterations;
      break;
    }

    // Quasi-Newton steps restart from the full step; plain descent keeps the
    // step adapted by the previous line search. A quasi-Newton failure falls
    // back once to the plain direction before the run counts as stalled.
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool quasi = qn.active() && attempt == 0;
      Field d = quasi ? qn.direction(g) : qn.base(g);
      double slope = inner(g, d);
      if (!(slope > 0.0)) {
        if (quasi)
          continue;
        break;
      }
      double tau = quasi ? cfg.step_init : step;
      while (tau >= min_step) {
        Field trial = u - tau * d;
        if (max_abs(trial) > 0.0) {
          Field projected = objective.project(trial);
          const double dj = objective.difference(u, projected);
          if (std::isfinite(dj) && dj < 0.0 && dj <= -cfg.armijo_c * tau * slope) {
            Field g_new = objective.gradient(projected);
            qn.update(projected - u, g_new - g);
            u = std::move(projected);
            g = std::move(g_new);
            j = objective.value(u);
            report.energy_decrease.push_back(dj);
            accepted = true;
            break;
          }
        }
        tau *= cfg.armijo_shrink;
      }
      if (!quasi)
        step = accepted ? tau / cfg.armijo_shrink : tau;
      if (!accepted)
        qn.reset();
    }
    if (!accepted) {
      report.termination = Termination::LineSearchStalled;
      break;
    }
    report.energy_history.push_back(j);
  }
  report.iterations = it;
  report.energy = j;
  report.sign_pattern = sign_pattern(u);
  return {std::move(u), std::move(report)};
}

Solution descend(const Field &u0, const Coefficients &c, const SplitParams &p,
                 const SolverConfig &cfg) {
  LogObjective objective(c, p);
  if (cfg.preconditioner == Preconditioner::H1) {
    const RieszMap riesz(c);
    return descend(u0, objective, cfg, &riesz);
  }
  return descend(u0, objective, cfg);
}

SolutionCheck check_solution(const Field &u, const Coefficients &c, const SplitParams &p) {
  const EnergyBreakdown e = energy(u, c, p);
  SolutionCheck r;
  r.relative_residual = l2_norm(gradient_field(u, c)) / std::sqrt(e.quad);
  r.nehari_relative = std::abs(e.nehari_residual) / e.quad;
  r.level_relative = std::abs(e.j - 0.5 * e.q_mass) / std::abs(e.j);
  return r;
}

SignSplit sign_split(const Field &u, const Coefficients &c, const SplitParams &p) {
  const Grid &g = u.grid();
  Field plus(g), minus(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    plus[i] = std::max(u[i], 0.0);
    minus[i] = std::min(u[i], 0.0);
  }
  apply_boundary(plus);
  apply_boundary(minus);
  SignSplit s;
  s.j = energy(u, c, p).j;
  s.j_plus = energy(plus, c, p).j;
  s.j_minus = energy(minus, c, p).j;

  const auto a = plus.values();
  const auto b = minus.values();
  const double total = par::sum(static_cast<std::ptrdiff_t>(g.size()), [&](std::ptrdiff_t k) {
    const auto idx = static_cast<std::size_t>(k);
    const int i0 = g.axis_index(idx, 0), i1 = g.axis_index(idx, 1);
    const double da = g.read(a, i0 + 1, i1) - g.read(a, i0, i1);
    const double db = g.read(b, i0 + 1, i1) - g.read(b, i0, i1);
    double r = da * db / (g.spacing(0) * g.spacing(0));
    if (g.dim() == 2) {
      const double ea = g.read(a, i0, i1 + 1) - g.read(a, i0, i1);
      const double eb = g.read(b, i0, i1 + 1) - g.read(b, i0, i1);
      r += ea * eb / (g.spacing(1) * g.spacing(1));
    }
    return r;
  });
  s.crossing = total * g.cell_volume();
  return s;
}

GaussonParams gausson_params(double v0, double q0, int dim) {
  if (!(q0 > 0.0) || !(v0 + q0 > 0.0))
    throw PositivityViolation("Gausson needs Q0 > 0 and V0 + Q0 > 0");
  return {(q0 * dim + v0) / (2.0 * q0), q0 / 2.0};
}

Field gausson(double v0, double q0, const Grid &grid) {
  const GaussonParams gp = gausson_params(v0, q0, grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    const double half = 0.5 * grid.box_length(a);
    if (std::exp(-gp.width * half * half) >= 1e-12) {
      std::ostringstream msg;
      msg << "box half-width " << half << " too small: Gausson tail exceeds 1e-12 of its peak";
      throw BoxTooSmall(msg.str());
    }
  }
  const double peak = std::exp(gp.amplitude_exponent);
  Field u(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double d = grid.coordinate(i, a) - (grid.origin(a) + 0.5 * grid.box_length(a));
      r2 += d * d;
    }
    u[i] = peak * std::exp(-gp.width * r2);
  }
  apply_boundary(u);
  return u;
}

double orbit_distance(const Field &u1, const Field &u2, int step_cells) {
  const Grid &g = u1.grid();
  require_same_grid(g, u2.grid());
  if (!g.periodic())
    throw OrbitUndefined();
  const int step0 = step_cells > 0 ? step_cells : g.cells_per_unit(0);
  const int step1 = g.dim() == 2 ? (step_cells > 0 ? step_cells : g.cells_per_unit(1)) : 1;
  const int n0 = g.cells(0) / step0;
  const int n1 = g.dim() == 2 ? g.cells(1) / step1 : 1;
  const auto a = u1.values();
  const auto b = u2.values();
  const double w = g.cell_volume();

  double best = std::numeric_limits<double>::infinity();
  for (int k1 = 0; k1 < n1; ++k1) {
    for (int k0 = 0; k0 < n0; ++k0) {
      ExactSum minus, plus;
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double shifted =
            g.read(b, g.axis_index(idx, 0) - k0 * step0, g.axis_index(idx, 1) - k1 * step1);
        const double dm = a[idx] - shifted;
        const double dp = a[idx] + shifted;
        minus.add(dm * dm);
        plus.add(dp * dp);
      }
      best = std::min({best, std::sqrt(minus.value() * w), std::sqrt(plus.value() * w)});
    }
  }
  return best;
}

std::vector<Symmetry> symmetry_classes(const Grid &grid) {
  std::vector<Symmetry> out{Symmetry{}};
  if (!grid.periodic())
    return out;
  const auto length = static_cast<int>(grid.box_length(0));
  for (int period = 1; period < length; ++period) {
    if (length % period != 0)
      continue;
    out.push_back({{period, 0}, 1});
    if ((length / period) % 2 == 0)
      out.push_back({{period, 0}, -1});
  }
  return out;
}

Field random_initializer(const Coefficients &c, const SolverConfig &cfg, std::uint64_t start,
                         const Symmetry &symmetry, int *bumps_out) {
  const Grid &g = c.grid();
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(start), static_cast<std::uint32_t>(start >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Symmetric starts place one bump per fundamental cell and let the orbit
  // averaging replicate it.
  const int bumps =
      symmetry.trivial() ? 1 + static_cast<int>(unit(rng) * cfg.max_bumps) % cfg.max_bumps : 1;
  const double width = 0.5 * std::accumulate(c.Q().values().begin(), c.Q().values().end(), 0.0) /
                       static_cast<double>(g.size());
  Field u(g);
  for (int b = 0; b < bumps; ++b) {
    std::array<double, 2> center{0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) {
      const double extent = symmetry.trivial() || symmetry.shift[a] == 0
                                ? g.box_length(a)
                                : static_cast<double>(symmetry.shift[a]);
      const auto lattice_sites = static_cast<int>(std::max(1.0, std::floor(extent)));
      const int site = static_cast<int>(unit(rng) * lattice_sites) % lattice_sites;
      center[a] = g.origin(a) + site + cfg.jitter * (2.0 * unit(rng) - 1.0);
    }
    const double amplitude = (unit(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + unit(rng));
    for (std::size_t i = 0; i < g.size(); ++i) {
      double r2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        double d = g.coordinate(i, a) - center[a];
        if (g.periodic()) // nearest periodic image
          d -= g.box_length(a) * std::round(d / g.box_length(a));
        r2 += d * d;
      }
      u[i] += amplitude * std::exp(-width * r2);
    }
  }
  if (bumps_out != nullptr)
    *bumps_out = bumps;
  apply_boundary(u);
  return symmetrize(u, symmetry);
}

MultistartResult multistart(const Coefficients &c, const SplitParams &p, const SolverConfig &cfg,
                            int threads) {
  cfg.validate();
  const Grid &g = c.grid();
  const std::vector<Symmetry> classes =
      cfg.symmetric_starts ? symmetry_classes(g) : std::vector<Symmetry>{Symmetry{}};
  std::optional<RieszMap> riesz;
  if (cfg.preconditioner == Preconditioner::H1)
    riesz.emplace(c);
  const LogObjective objective(c, p);

  const int n = cfg.n_starts;
  std::vector<std::optional<Solution>> runs(static_cast<std::size_t>(n));
  std::vector<StartRecord> records(static_cast<std::size_t>(n));
  const int team = threads > 0 ? std::min(threads, par::max_threads()) : par::max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
  for (int s = 0; s < n; ++s) {
    StartRecord &rec = records[static_cast<std::size_t>(s)];
    rec.index = static_cast<std::uint64_t>(s);
    rec.symmetry = classes[static_cast<std::size_t>(s) % classes.size()];
    Field u0 = random_initializer(c, cfg, rec.index, rec.symmetry, &rec.bumps);
    if (max_abs(u0) == 0.0)
      continue;
    Solution sol = descend(u0, objective, cfg, riesz ? &*riesz : nullptr, rec.symmetry);
    rec.converged = sol.report.converged;
    rec.energy = sol.report.energy;
    rec.iterations = sol.report.iterations;
    if (sol.report.converged)
      runs[static_cast<std::size_t>(s)] = std::move(sol);
  }

  std::vector<int> order;
  for (int s = 0; s < n; ++s)
    if (runs[static_cast<std::size_t>(s)])
      order.push_back(s);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return runs[static_cast<std::size_t>(a)]->report.energy <
           runs[static_cast<std::size_t>(b)]->report.energy;
  });

  // Constant coefficients are invariant under every grid translation.
  const int step_cells = c.descriptor().is_constant() && g.periodic() ? 1 : 0;
  MultistartResult result;
  for (int s : order) {
    Solution &candidate = *runs[static_cast<std::size_t>(s)];
    int match = -1;
    for (std::size_t k = 0; k < result.solutions.size() && match < 0; ++k)
      if (orbit_distance(result.solutions[k].u, candidate.u, step_cells) <= cfg.dedup_tol)
        match = static_cast<int>(k);
    if (match < 0) {
      match = static_cast<int>(result.solutions.size());
      result.solutions.push_back(std::move(candidate));
    }
    records[static_cast<std::size_t>(s)].class_index = match;
  }
  result.starts = std::move(records);
  return result;
}

} // namespace logsol
