#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace logsol {

enum class Boundary { Periodic, Dirichlet };

class Coefficients;

/// Truncated computational box standing in for R^N, N in {1, 2}.
///
/// Nodes sit at origin + i*h along each axis, i in [0, cells). On a periodic
/// grid the box length must be an integer with an integer number of cells per
/// unit, so integer translations permute nodes exactly. On a Dirichlet grid the
/// node with axis index 0 lies on the boundary and reads as zero, and the node
/// one past the last stored index is an implicit zero as well.
class Grid {
public:
  Grid(int dim, std::array<int, 2> cells, std::array<double, 2> box_length,
       Boundary boundary, std::array<double, 2> origin = {0.0, 0.0});

  static Grid periodic_1d(int cells, int box_length);
  static Grid dirichlet_1d(int cells, double box_length, double origin);

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[axis]; }
  double box_length(int axis) const { return box_[axis]; }
  double origin(int axis) const { return origin_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::Periodic; }

  std::size_t size() const { return size_; }
  /// Product of box lengths (the measure of the box).
  double volume() const;
  /// Quadrature weight volume / nodes, shared by every integral.
  double cell_volume() const { return volume() / static_cast<double>(size_); }
  /// Nodes per unit length along an axis (periodic grids only).
  int cells_per_unit(int axis) const;

  int axis_index(std::size_t idx, int axis) const {
    return axis == 0 ? static_cast<int>(idx % cells_[0])
                     : static_cast<int>(idx / cells_[0]);
  }
  std::size_t index(int i0, int i1 = 0) const {
    return static_cast<std::size_t>(i0) +
           static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(i1);
  }
  double coordinate(std::size_t idx, int axis) const {
    return origin_[axis] + axis_index(idx, axis) * spacing_[axis];
  }
  /// True for Dirichlet boundary nodes, whose stored value is ignored.
  bool is_boundary_node(std::size_t idx) const;

  /// Value of u at integer node (i0, i1): wraps on periodic grids, reads zero
  /// outside the box or on the boundary for Dirichlet grids.
  double read(std::span<const double> u, int i0, int i1) const {
    if (boundary_ == Boundary::Periodic) {
      i0 = wrap(i0, cells_[0]);
      i1 = dim_ == 2 ? wrap(i1, cells_[1]) : 0;
    } else {
      if (i0 <= 0 || i0 >= cells_[0])
        return 0.0;
      if (dim_ == 2 && (i1 <= 0 || i1 >= cells_[1]))
        return 0.0;
    }
    return u[index(i0, i1)];
  }

  bool operator==(const Grid &other) const = default;

private:
  static int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
  }

  int dim_;
  std::array<int, 2> cells_;
  std::array<double, 2> box_;
  Boundary boundary_;
  std::array<double, 2> origin_;
  std::array<double, 2> spacing_;
  std::size_t size_;
};

/// Real samples over a grid, lexicographic with axis 0 fastest.
class Field {
public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  const Grid &grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double &operator[](std::size_t i) { return values_[i]; }

  bool operator==(const Field &other) const = default;

private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator*(double s, const Field &u);
Field operator+(const Field &a, const Field &b);
Field operator-(const Field &a, const Field &b);
Field operator-(const Field &u);

void require_same_grid(const Grid &a, const Grid &b);

/// Zero the Dirichlet boundary nodes (no-op on periodic grids).
void apply_boundary(Field &u);

/// Rectangle rule over the nodes that carry unknowns.
double integrate(const Field &f);
/// integrate(u * v) without materializing the product.
double inner(const Field &u, const Field &v);
double l2_norm(const Field &u);
double max_abs(const Field &u);
bool all_finite(const Field &u);

/// Discrete -Δ_h with the 2u_i - u_{i-1} - u_{i+1} stencil per axis.
Field laplacian_apply(const Field &u);

/// Sum over axes of the squared forward difference at one node.
double gradient_sq_at(const Grid &grid, std::span<const double> u, std::size_t idx);

/// Squared energy norm: integral of |grad_h u|^2 + (V + Q) u^2, with forward
/// differences so that it equals inner(u, -Δ_h u) + mass term exactly.
double h1_norm_sq(const Field &u, const Coefficients &c);

/// Translate by an integer vector k: result(x) = u(x - k).
Field shift(const Field &u, std::array<int, 2> k);

} // namespace logsol
