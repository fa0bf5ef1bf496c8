#include "logsol/lattice.hpp"

#include "logsol/coefficients.hpp"
#include "logsol/errors.hpp"
#include "logsol/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace logsol {

Grid::Grid(int dim, std::array<int, 2> cells, std::array<double, 2> box_length,
           Boundary boundary, std::array<double, 2> origin)
    : dim_(dim), cells_(cells), box_(box_length), boundary_(boundary),
      origin_(origin), spacing_{1.0, 1.0}, size_(1) {
  if (dim != 1 && dim != 2)
    throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (dim == 1) {
    cells_[1] = 1;
    box_[1] = 1.0;
    origin_[1] = 0.0;
  }
  for (int a = 0; a < dim; ++a) {
    if (cells_[a] < 8)
      throw InvalidArgument("need at least 8 cells per axis, got " +
                            std::to_string(cells_[a]));
    if (!(box_[a] > 0.0) || !std::isfinite(box_[a]))
      throw InvalidArgument("box length must be positive");
    if (boundary == Boundary::Periodic) {
      if (box_[a] != std::floor(box_[a]))
        throw InvalidArgument("periodic box length must be an integer");
      const auto units = static_cast<int>(box_[a]);
      if (cells_[a] % units != 0)
        throw InvalidArgument("periodic grid needs an integer number of cells per unit length");
    }
    spacing_[a] = box_[a] / cells_[a];
    size_ *= static_cast<std::size_t>(cells_[a]);
  }
}

Grid Grid::periodic_1d(int cells, int box_length) {
  return Grid(1, {cells, 1}, {static_cast<double>(box_length), 1.0}, Boundary::Periodic);
}

Grid Grid::dirichlet_1d(int cells, double box_length, double origin) {
  return Grid(1, {cells, 1}, {box_length, 1.0}, Boundary::Dirichlet, {origin, 0.0});
}

double Grid::volume() const { return dim_ == 1 ? box_[0] : box_[0] * box_[1]; }

int Grid::cells_per_unit(int axis) const {
  if (!periodic())
    throw OrbitUndefined();
  return cells_[axis] / static_cast<int>(box_[axis]);
}

bool Grid::is_boundary_node(std::size_t idx) const {
  if (periodic())
    return false;
  if (axis_index(idx, 0) == 0)
    return true;
  return dim_ == 2 && axis_index(idx, 1) == 0;
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("field length " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
}

void require_same_grid(const Grid &a, const Grid &b) {
  if (!(a == b))
    throw GridMismatch();
}

namespace {

template <typename Op> Field combine(const Field &a, const Field &b, Op op) {
  require_same_grid(a.grid(), b.grid());
  Field out(a.grid());
  const auto x = a.values();
  const auto y = b.values();
  par::map(static_cast<std::ptrdiff_t>(a.size()), out.values().data(),
           [&](std::ptrdiff_t i) { return op(x[i], y[i]); });
  return out;
}

// Sum over unknown-carrying nodes, then scale by volume / node count so that a
// constant integrand on a unit periodic box integrates to exactly 1.
template <typename F> double quadrature(const Grid &grid, F &&f) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  double total = 0.0;
  if (grid.periodic()) {
    total = par::sum(n, f);
  } else {
    total = par::sum(n, [&](std::ptrdiff_t i) {
      return grid.is_boundary_node(static_cast<std::size_t>(i)) ? 0.0 : f(i);
    });
  }
  return total * grid.cell_volume();
}

} // namespace

Field operator*(double s, const Field &u) {
  Field out(u.grid());
  const auto x = u.values();
  par::map(static_cast<std::ptrdiff_t>(u.size()), out.values().data(),
           [&](std::ptrdiff_t i) { return s * x[i]; });
  return out;
}

Field operator+(const Field &a, const Field &b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

Field operator-(const Field &a, const Field &b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

Field operator-(const Field &u) { return -1.0 * u; }

void apply_boundary(Field &u) {
  const Grid &g = u.grid();
  if (g.periodic())
    return;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (g.is_boundary_node(i))
      u[i] = 0.0;
}

double integrate(const Field &f) {
  const auto x = f.values();
  return quadrature(f.grid(), [&](std::ptrdiff_t i) { return x[i]; });
}

double inner(const Field &u, const Field &v) {
  require_same_grid(u.grid(), v.grid());
  const auto x = u.values();
  const auto y = v.values();
  return quadrature(u.grid(), [&](std::ptrdiff_t i) { return x[i] * y[i]; });
}

double l2_norm(const Field &u) { return std::sqrt(inner(u, u)); }

double max_abs(const Field &u) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!u.grid().is_boundary_node(i))
      m = std::max(m, std::abs(u[i]));
  return m;
}

bool all_finite(const Field &u) {
  return std::all_of(u.values().begin(), u.values().end(),
                     [](double x) { return std::isfinite(x); });
}

double gradient_sq_at(const Grid &grid, std::span<const double> u, std::size_t idx) {
  const int i0 = grid.axis_index(idx, 0);
  const int i1 = grid.axis_index(idx, 1);
  const double here = grid.read(u, i0, i1);
  const double d0 = (grid.read(u, i0 + 1, i1) - here) / grid.spacing(0);
  double g = d0 * d0;
  if (grid.dim() == 2) {
    const double d1 = (grid.read(u, i0, i1 + 1) - here) / grid.spacing(1);
    g += d1 * d1;
  }
  return g;
}

Field laplacian_apply(const Field &u) {
  const Grid &g = u.grid();
  Field out(g);
  const auto x = u.values();
  const double inv_h0 = 1.0 / (g.spacing(0) * g.spacing(0));
  const double inv_h1 = 1.0 / (g.spacing(1) * g.spacing(1));
  par::map(static_cast<std::ptrdiff_t>(g.size()), out.values().data(), [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    if (g.is_boundary_node(idx))
      return 0.0;
    const int i0 = g.axis_index(idx, 0);
    const int i1 = g.axis_index(idx, 1);
    const double c = x[idx];
    double r = (2.0 * c - g.read(x, i0 - 1, i1) - g.read(x, i0 + 1, i1)) * inv_h0;
    if (g.dim() == 2)
      r += (2.0 * c - g.read(x, i0, i1 - 1) - g.read(x, i0, i1 + 1)) * inv_h1;
    return r;
  });
  return out;
}

double h1_norm_sq(const Field &u, const Coefficients &c) {
  const Grid &g = u.grid();
  require_same_grid(g, c.grid());
  const auto x = u.values();
  const auto v = c.V().values();
  const auto q = c.Q().values();
  const double total = par::sum(static_cast<std::ptrdiff_t>(g.size()), [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    const double grad = gradient_sq_at(g, x, idx);
    if (g.is_boundary_node(idx))
      return grad;
    return grad + (v[idx] + q[idx]) * x[idx] * x[idx];
  });
  return total * g.cell_volume();
}

Field shift(const Field &u, std::array<int, 2> k) {
  const Grid &g = u.grid();
  if (!g.periodic())
    throw OrbitUndefined();
  const int s0 = k[0] * g.cells_per_unit(0);
  const int s1 = g.dim() == 2 ? k[1] * g.cells_per_unit(1) : 0;
  Field out(g);
  const auto x = u.values();
  par::map(static_cast<std::ptrdiff_t>(g.size()), out.values().data(), [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    return g.read(x, g.axis_index(idx, 0) - s0, g.axis_index(idx, 1) - s1);
  });
  return out;
}

} // namespace logsol
