#include "logsol/plap.hpp"

#include "logsol/errors.hpp"
#include "logsol/extended.hpp"
#include "logsol/parallel.hpp"

#include <cmath>
#include <sstream>

namespace logsol {

PLapParams::PLapParams(double p) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    std::ostringstream msg;
    msg << "p-Laplacian exponent must exceed 1, got " << p;
    throw InvalidArgument(msg.str());
  }
}

namespace {

// |s|^p and |s|^p log|s|^p with the continuous extension at 0.
double abs_pow(double s, double p) { return std::pow(std::abs(s), p); }
double abs_pow_log(double s, double p) {
  return s == 0.0 ? 0.0 : std::pow(std::abs(s), p) * (p * std::log(std::abs(s)));
}

} // namespace

PLapBreakdown plap_breakdown(const Field &u, const Coefficients &c, const PLapParams &pp) {
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  const auto x = u.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();
  const double p = pp.p();

  enum { kQuad, kLog, kQMass, kNehari, kJ, kCount };
  ExactSum acc[kCount];
  par::sum_many(static_cast<std::ptrdiff_t>(g.size()), acc, [&](std::ptrdiff_t i, ExactSum *a) {
    const auto idx = static_cast<std::size_t>(i);
    const double grad = std::pow(gradient_sq_at(g, x, idx), 0.5 * p);
    if (g.is_boundary_node(idx)) {
      a[kQuad].add(grad);
      a[kNehari].add(grad);
      a[kJ].add(grad);
      return;
    }
    const double up = abs_pow(x[idx], p);
    const double log_density = q[idx] * abs_pow_log(x[idx], p);
    const double mass = (v[idx] + q[idx]) * up;
    a[kQuad].add(grad + mass);
    a[kLog].add(log_density);
    a[kQMass].add(q[idx] * up);
    a[kNehari].add(grad + v[idx] * up - log_density);
    a[kJ].add(grad + mass - log_density);
  });
  const double w = g.cell_volume();
  PLapBreakdown b;
  b.quad = acc[kQuad].value() * w;
  b.logterm = acc[kLog].value() * w;
  b.q_mass = acc[kQMass].value() * w;
  b.nehari_residual = acc[kNehari].value() * w;
  b.j = acc[kJ].value() * w / p;
  return b;
}

double plap_energy(const Field &u, const Coefficients &c, const PLapParams &pp) {
  return plap_breakdown(u, c, pp).j;
}

double plap_energy_difference(const Field &a, const Field &b, const Coefficients &c,
                              const PLapParams &pp) {
  const Grid &g = a.grid();
  require_same_grid(g, b.grid());
  require_same_grid(g, c.grid());
  const auto xa = a.values();
  const auto xb = b.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();
  const ext::real p = pp.p();
  auto density = [&](std::span<const double> x, std::size_t idx) {
    const ext::real grad = std::pow(ext::gradient_sq_at(g, x, idx), 0.5L * p);
    if (g.is_boundary_node(idx))
      return grad;
    const ext::real s = std::abs(static_cast<ext::real>(x[idx]));
    const ext::real up = std::pow(s, p);
    const ext::real log_up = s == 0.0L ? 0.0L : p * std::log(s);
    return grad + (static_cast<ext::real>(v[idx]) + q[idx]) * up - q[idx] * up * log_up;
  };
  ExactSum acc[1];
  par::sum_many(static_cast<std::ptrdiff_t>(g.size()), acc, [&](std::ptrdiff_t i, ExactSum *s) {
    const auto idx = static_cast<std::size_t>(i);
    ext::add(s[0], density(xb, idx) - density(xa, idx));
  });
  return acc[0].value() * g.cell_volume() / pp.p();
}

Field plap_gradient(const Field &u, const Coefficients &c, const PLapParams &pp) {
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  const auto x = u.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();
  const double p = pp.p();
  const double eps2 = PLapParams::kRegularization * PLapParams::kRegularization;
  const auto n = static_cast<std::ptrdiff_t>(g.size());

  // Node fluxes |∇u|^{p-2} D_a u along each axis.
  std::vector<double> flux0(g.size()), flux1(g.dim() == 2 ? g.size() : 0);
#pragma omp parallel for schedule(static) if (n >= par::kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const int i0 = g.axis_index(idx, 0);
    const int i1 = g.axis_index(idx, 1);
    const double here = g.read(x, i0, i1);
    const double d0 = (g.read(x, i0 + 1, i1) - here) / g.spacing(0);
    const double d1 = g.dim() == 2 ? (g.read(x, i0, i1 + 1) - here) / g.spacing(1) : 0.0;
    const double norm2 = d0 * d0 + d1 * d1;
    double weight = 1.0;
    if (p != 2.0)
      weight = p < 2.0 ? std::pow(norm2 + eps2, 0.5 * (p - 2.0)) : std::pow(norm2, 0.5 * (p - 2.0));
    flux0[idx] = weight * d0;
    if (g.dim() == 2)
      flux1[idx] = weight * d1;
  }

  auto flux_at = [&](const std::vector<double> &f, int i0, int i1) {
    if (g.periodic()) {
      i0 = (i0 + g.cells(0)) % g.cells(0);
      if (g.dim() == 2)
        i1 = (i1 + g.cells(1)) % g.cells(1);
    }
    return f[g.index(i0, i1)];
  };

  Field out(g);
  par::map(n, out.values().data(), [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    if (g.is_boundary_node(idx))
      return 0.0;
    const int i0 = g.axis_index(idx, 0);
    const int i1 = g.axis_index(idx, 1);
    double r = (flux_at(flux0, i0 - 1, i1) - flux0[idx]) / g.spacing(0);
    if (g.dim() == 2)
      r += (flux_at(flux1, i0, i1 - 1) - flux1[idx]) / g.spacing(1);
    const double s = x[idx];
    if (s == 0.0)
      return r;
    const double base = std::copysign(std::pow(std::abs(s), p - 1.0), s); // |s|^{p-2} s
    return r + (v[idx] * base - q[idx] * base * (p * std::log(std::abs(s))));
  });
  return out;
}

double plap_nehari_scale(const Field &u, const Coefficients &c, const PLapParams &pp) {
  if (max_abs(u) == 0.0)
    throw ZeroField();
  const PLapBreakdown b = plap_breakdown(u, c, pp);
  if (!(b.q_mass > 0.0))
    throw ZeroField();
  return std::exp(b.j / b.q_mass - 1.0 / pp.p());
}

Field plap_nehari_project(const Field &u, const Coefficients &c, const PLapParams &pp) {
  return plap_nehari_scale(u, c, pp) * u;
}

} // namespace logsol
