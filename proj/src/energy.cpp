#include "logsol/energy.hpp"

#include "logsol/errors.hpp"
#include "logsol/extended.hpp"
#include "logsol/parallel.hpp"
#include "logsol/spectral.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace logsol {

SplitParams::SplitParams(double delta) : delta_(delta) {
  if (!(delta > 0.0) || delta > kConvexityLimit) {
    std::ostringstream msg;
    msg << "split threshold delta = " << delta << " must lie in (0, e^{-3/2}]";
    throw InvalidArgument(msg.str());
  }
}

namespace {
double sign(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }
Branch branch_of(double s, const SplitParams &p) {
  return std::abs(s) < p.delta() ? Branch::Inner : Branch::Outer;
}
} // namespace

double f1_eval(double s, const SplitParams &p, Branch b) {
  const double d = p.delta();
  if (b == Branch::Inner)
    return -0.5 * s2_log_s2(s);
  return -0.5 * s * s * (2.0 * std::log(d) + 3.0) + 2.0 * d * std::abs(s) - 0.5 * d * d;
}

double f1_prime(double s, const SplitParams &p, Branch b) {
  const double d = p.delta();
  if (b == Branch::Inner)
    return s == 0.0 ? 0.0 : -s * (2.0 * std::log(std::abs(s))) - s;
  return -s * (2.0 * std::log(d) + 3.0) + 2.0 * d * sign(s);
}

double f2_eval(double s, const SplitParams &p, Branch b) {
  const double d = p.delta();
  if (b == Branch::Inner)
    return 0.0;
  return 0.5 * s * s * (2.0 * std::log(std::abs(s) / d)) + 2.0 * d * std::abs(s) -
         1.5 * s * s - 0.5 * d * d;
}

double f2_prime(double s, const SplitParams &p, Branch b) {
  const double d = p.delta();
  if (b == Branch::Inner)
    return 0.0;
  return s * (2.0 * std::log(std::abs(s) / d)) - 2.0 * s + 2.0 * d * sign(s);
}

double f1_eval(double s, const SplitParams &p) { return f1_eval(s, p, branch_of(s, p)); }
double f1_prime(double s, const SplitParams &p) { return f1_prime(s, p, branch_of(s, p)); }
double f2_eval(double s, const SplitParams &p) { return f2_eval(s, p, branch_of(s, p)); }
double f2_prime(double s, const SplitParams &p) { return f2_prime(s, p, branch_of(s, p)); }

EnergyBreakdown energy(const Field &u, const Coefficients &c, const SplitParams &p) {
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  const auto x = u.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();

  enum { kQuad, kLog, kQMass, kF1, kF2, kNehari, kJ, kCount };
  ExactSum acc[kCount];
  par::sum_many(static_cast<std::ptrdiff_t>(g.size()), acc, [&](std::ptrdiff_t i, ExactSum *a) {
    const auto idx = static_cast<std::size_t>(i);
    const double grad = gradient_sq_at(g, x, idx);
    if (g.is_boundary_node(idx)) {
      a[kQuad].add(grad);
      a[kNehari].add(grad);
      a[kJ].add(grad);
      return;
    }
    const double s = x[idx];
    const double s2 = s * s;
    const double mass = (v[idx] + q[idx]) * s2;
    const double log_density = q[idx] * s2_log_s2(s);
    a[kQuad].add(grad + mass);
    a[kLog].add(log_density);
    a[kQMass].add(q[idx] * s2);
    a[kF1].add(q[idx] * f1_eval(s, p));
    a[kF2].add(q[idx] * f2_eval(s, p));
    a[kNehari].add(grad + v[idx] * s2 - log_density);
    a[kJ].add(grad + mass - log_density);
  });

  const double w = g.cell_volume();
  EnergyBreakdown e;
  e.quad = acc[kQuad].value() * w;
  e.logterm = acc[kLog].value() * w;
  e.q_mass = acc[kQMass].value() * w;
  e.psi = acc[kF1].value() * w;
  e.phi = 0.5 * e.quad - acc[kF2].value() * w;
  e.nehari_residual = acc[kNehari].value() * w;
  e.j = 0.5 * acc[kJ].value() * w;
  return e;
}

double energy_difference(const Field &a, const Field &b, const Coefficients &c) {
  const Grid &g = a.grid();
  require_same_grid(g, b.grid());
  require_same_grid(g, c.grid());
  const auto xa = a.values();
  const auto xb = b.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();
  auto density = [&](std::span<const double> x, std::size_t idx) {
    const ext::real grad = ext::gradient_sq_at(g, x, idx);
    if (g.is_boundary_node(idx))
      return grad;
    const ext::real s = x[idx];
    const ext::real s2 = s * s;
    const ext::real log_s2 = s == 0.0L ? 0.0L : 2.0L * std::log(std::abs(s));
    return grad + (static_cast<ext::real>(v[idx]) + q[idx]) * s2 - q[idx] * s2 * log_s2;
  };
  ExactSum acc[1];
  par::sum_many(static_cast<std::ptrdiff_t>(g.size()), acc, [&](std::ptrdiff_t i, ExactSum *s) {
    const auto idx = static_cast<std::size_t>(i);
    ext::add(s[0], density(xb, idx) - density(xa, idx));
  });
  return 0.5 * acc[0].value() * g.cell_volume();
}

Field gradient_field(const Field &u, const Coefficients &c) {
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  Field out = laplacian_apply(u);
  const auto x = u.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();
  auto r = out.values();
  par::map(static_cast<std::ptrdiff_t>(g.size()), r.data(), [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    if (g.is_boundary_node(idx))
      return 0.0;
    const double s = x[idx];
    const double nonlinear = s == 0.0 ? 0.0 : q[idx] * s * (2.0 * std::log(std::abs(s)));
    return r[idx] + v[idx] * s - nonlinear;
  });
  return out;
}

namespace {

struct MassAndGradient {
  double mass = 0.0;     // ∫u²
  double gradient = 0.0; // ‖∇u‖² of the interpolant
  double log = 0.0;      // ∫u² log u²
};

MassAndGradient mass_and_gradient(const Field &u) {
  const Grid &g = u.grid();
  const auto x = u.values();
  ExactSum acc[2];
  par::sum_many(static_cast<std::ptrdiff_t>(g.size()), acc, [&](std::ptrdiff_t i, ExactSum *a) {
    const auto idx = static_cast<std::size_t>(i);
    if (g.is_boundary_node(idx))
      return;
    a[0].add(x[idx] * x[idx]);
    a[1].add(s2_log_s2(x[idx]));
  });
  const double w = g.cell_volume();
  return {acc[0].value() * w, spectral_gradient_sq(u), acc[1].value() * w};
}

void require_positive_a(double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw InvalidArgument("log-Sobolev parameter a must be positive");
}

// Coefficient sample at a node index, wrapping on periodic grids and clamping
// on Dirichlet grids (coefficients do not vanish at the boundary).
double coefficient_at(const Grid &g, std::span<const double> f, int i0, int i1) {
  auto fix = [&](int i, int n) {
    if (g.periodic())
      return ((i % n) + n) % n;
    return std::clamp(i, 0, n - 1);
  };
  return f[g.index(fix(i0, g.cells(0)), g.dim() == 2 ? fix(i1, g.cells(1)) : 0)];
}

} // namespace

double logsob_slack(const Field &u, double a) {
  require_positive_a(a);
  const MassAndGradient m = mass_and_gradient(u);
  if (!(m.mass > 0.0))
    throw ZeroField();
  const int n = u.grid().dim();
  const double rhs = a * a / std::numbers::pi * m.gradient +
                     (std::log(m.mass) - n * (1.0 + std::log(a))) * m.mass;
  return rhs - m.log;
}

double weighted_logsob_bound(const Field &u, const Coefficients &c, double a) {
  require_positive_a(a);
  if (2.0 * a * a * c.max_Q() / std::numbers::pi > 0.5) {
    std::ostringstream msg;
    msg << "a = " << a << " too large: need 2 a^2 max Q / pi <= 1/2";
    throw InvalidArgument(msg.str());
  }
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  const auto x = u.values();
  const auto q = c.Q().values();

  const auto du = staggered_derivatives(u);
  const auto d0 = du[0].values(), d1 = du[1].values();

  ExactSum acc[3]; // ∫Q|∇u|², ∫u²|∇√Q|², ∫Qu²
  par::sum_many(static_cast<std::ptrdiff_t>(g.size()), acc, [&](std::ptrdiff_t i, ExactSum *s) {
    const auto idx = static_cast<std::size_t>(i);
    s[0].add(q[idx] * (d0[idx] * d0[idx] + d1[idx] * d1[idx]));
    if (g.is_boundary_node(idx))
      return;
    const int i0 = g.axis_index(idx, 0);
    const int i1 = g.axis_index(idx, 1);
    double grad_sqrt_q = 0.0;
    for (int axis = 0; axis < g.dim(); ++axis) {
      const int e0 = axis == 0 ? 1 : 0;
      const int e1 = axis == 1 ? 1 : 0;
      const double d = (std::sqrt(coefficient_at(g, q, i0 + e0, i1 + e1)) -
                        std::sqrt(coefficient_at(g, q, i0 - e0, i1 - e1))) /
                       (2.0 * g.spacing(axis));
      grad_sqrt_q += d * d;
    }
    s[1].add(x[idx] * x[idx] * grad_sqrt_q);
    s[2].add(q[idx] * x[idx] * x[idx]);
  });
  const double w = g.cell_volume();
  const double grad_term = acc[0].value() * w;
  const double coeff_term = acc[1].value() * w;
  const double q_mass = acc[2].value() * w;
  if (!(q_mass > 0.0))
    throw ZeroField();
  return 2.0 * a * a / std::numbers::pi * (grad_term + coeff_term) +
         (std::log(q_mass) - g.dim() * (1.0 + std::log(a))) * q_mass;
}

double weighted_logsob_lhs(const Field &u, const Coefficients &c) {
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  const auto x = u.values();
  const auto q = c.Q().values();
  Field density(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double qu2 = q[i] * x[i] * x[i];
    density[i] = qu2 == 0.0 ? 0.0 : qu2 * std::log(qu2);
  }
  return integrate(density);
}

} // namespace logsol
