#include "logsol/reference.hpp"

#include "logsol/exact_sum.hpp"

#include <cmath>

namespace logsol::reference {

namespace {

// Loops run over every node (i0, i1) in storage order.
template <typename F> void for_each_node(const Grid &g, F &&f) {
  const int n1 = g.dim() == 2 ? g.cells(1) : 1;
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i0 = 0; i0 < g.cells(0); ++i0)
      f(i0, i1, g.index(i0, i1));
}

double weight(const Grid &g) { return g.cell_volume(); }

double forward(const Grid &g, std::span<const double> u, int i0, int i1, int axis) {
  const double here = g.read(u, i0, i1);
  const double next = axis == 0 ? g.read(u, i0 + 1, i1) : g.read(u, i0, i1 + 1);
  return (next - here) / g.spacing(axis);
}

double grad_sq(const Grid &g, std::span<const double> u, int i0, int i1) {
  double s = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const double d = forward(g, u, i0, i1, a);
    s += d * d;
  }
  return s;
}

} // namespace

double integrate(const Field &f) {
  const Grid &g = f.grid();
  ExactSum acc;
  for_each_node(g, [&](int, int, std::size_t idx) {
    if (!g.is_boundary_node(idx))
      acc.add(f[idx]);
  });
  return acc.value() * weight(g);
}

Field laplacian_apply(const Field &u) {
  const Grid &g = u.grid();
  const auto x = u.values();
  Field out(g);
  for_each_node(g, [&](int i0, int i1, std::size_t idx) {
    if (g.is_boundary_node(idx))
      return;
    const double c = x[idx];
    double r = (2.0 * c - g.read(x, i0 - 1, i1) - g.read(x, i0 + 1, i1)) *
               (1.0 / (g.spacing(0) * g.spacing(0)));
    if (g.dim() == 2)
      r += (2.0 * c - g.read(x, i0, i1 - 1) - g.read(x, i0, i1 + 1)) *
           (1.0 / (g.spacing(1) * g.spacing(1)));
    out[idx] = r;
  });
  return out;
}

double h1_norm_sq(const Field &u, const Coefficients &c) {
  const Grid &g = u.grid();
  const auto x = u.values();
  ExactSum acc;
  for_each_node(g, [&](int i0, int i1, std::size_t idx) {
    const double grad = grad_sq(g, x, i0, i1);
    if (g.is_boundary_node(idx))
      acc.add(grad);
    else
      acc.add(grad + (c.V()[idx] + c.Q()[idx]) * x[idx] * x[idx]);
  });
  return acc.value() * weight(g);
}

EnergyBreakdown energy(const Field &u, const Coefficients &c, const SplitParams &p) {
  const Grid &g = u.grid();
  const auto x = u.values();
  ExactSum quad, log, qmass, f1, f2, nehari, j;
  for_each_node(g, [&](int i0, int i1, std::size_t idx) {
    const double grad = grad_sq(g, x, i0, i1);
    if (g.is_boundary_node(idx)) {
      quad.add(grad);
      nehari.add(grad);
      j.add(grad);
      return;
    }
    const double s = x[idx];
    const double vv = c.V()[idx];
    const double qq = c.Q()[idx];
    const double ld = qq * s2_log_s2(s);
    const double mass = (vv + qq) * (s * s);
    quad.add(grad + mass);
    log.add(ld);
    qmass.add(qq * (s * s));
    f1.add(qq * f1_eval(s, p));
    f2.add(qq * f2_eval(s, p));
    nehari.add(grad + vv * (s * s) - ld);
    j.add(grad + mass - ld);
  });
  const double w = weight(g);
  EnergyBreakdown e;
  e.quad = quad.value() * w;
  e.logterm = log.value() * w;
  e.q_mass = qmass.value() * w;
  e.psi = f1.value() * w;
  e.phi = 0.5 * e.quad - f2.value() * w;
  e.nehari_residual = nehari.value() * w;
  e.j = 0.5 * j.value() * w;
  return e;
}

Field gradient_field(const Field &u, const Coefficients &c) {
  const Grid &g = u.grid();
  Field out = reference::laplacian_apply(u);
  for_each_node(g, [&](int, int, std::size_t idx) {
    if (g.is_boundary_node(idx))
      return;
    const double s = u[idx];
    const double nonlinear = s == 0.0 ? 0.0 : c.Q()[idx] * s * (2.0 * std::log(std::abs(s)));
    out[idx] = out[idx] + c.V()[idx] * s - nonlinear;
  });
  return out;
}

double plap_energy(const Field &u, const Coefficients &c, const PLapParams &pp) {
  const Grid &g = u.grid();
  const auto x = u.values();
  const double p = pp.p();
  ExactSum acc;
  for_each_node(g, [&](int i0, int i1, std::size_t idx) {
    const double grad = std::pow(grad_sq(g, x, i0, i1), 0.5 * p);
    if (g.is_boundary_node(idx)) {
      acc.add(grad);
      return;
    }
    const double s = x[idx];
    const double up = std::pow(std::abs(s), p);
    const double ld = s == 0.0 ? 0.0 : c.Q()[idx] * (up * (p * std::log(std::abs(s))));
    acc.add(grad + (c.V()[idx] + c.Q()[idx]) * up - ld);
  });
  return acc.value() * weight(g) / p;
}

Field plap_gradient(const Field &u, const Coefficients &c, const PLapParams &pp) {
  const Grid &g = u.grid();
  const auto x = u.values();
  const double p = pp.p();
  const double eps2 = PLapParams::kRegularization * PLapParams::kRegularization;

  // Flux |∇u|^{p-2} D_a u at node (i0, i1), recomputed on demand.
  auto flux = [&](int i0, int i1, int axis) {
    if (g.periodic()) {
      i0 = (i0 + g.cells(0)) % g.cells(0);
      if (g.dim() == 2)
        i1 = (i1 + g.cells(1)) % g.cells(1);
    }
    const double d0 = forward(g, x, i0, i1, 0);
    const double d1 = g.dim() == 2 ? forward(g, x, i0, i1, 1) : 0.0;
    const double n2 = d0 * d0 + d1 * d1;
    double w = 1.0;
    if (p != 2.0)
      w = p < 2.0 ? std::pow(n2 + eps2, 0.5 * (p - 2.0)) : std::pow(n2, 0.5 * (p - 2.0));
    return w * (axis == 0 ? d0 : d1);
  };

  Field out(g);
  for_each_node(g, [&](int i0, int i1, std::size_t idx) {
    if (g.is_boundary_node(idx))
      return;
    double r = (flux(i0 - 1, i1, 0) - flux(i0, i1, 0)) / g.spacing(0);
    if (g.dim() == 2)
      r += (flux(i0, i1 - 1, 1) - flux(i0, i1, 1)) / g.spacing(1);
    const double s = x[idx];
    if (s != 0.0) {
      const double base = std::copysign(std::pow(std::abs(s), p - 1.0), s);
      r += c.V()[idx] * base - c.Q()[idx] * base * (p * std::log(std::abs(s)));
    }
    out[idx] = r;
  });
  return out;
}

} // namespace logsol::reference
