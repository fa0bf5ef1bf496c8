#include "logsol/riesz.hpp"

#include "logsol/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <vector>

namespace logsol {

struct RieszMap::Impl {
  explicit Impl(const Grid &g) : grid(g) {}
  Grid grid;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
};

RieszMap::RieszMap(const Coefficients &c) : impl_(std::make_unique<Impl>(c.grid())) {
  const Grid &g = c.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(g.size() * (1 + 2 * g.dim()));

  auto neighbor = [&](int i0, int i1) -> Eigen::Index {
    if (g.periodic()) {
      i0 = (i0 % g.cells(0) + g.cells(0)) % g.cells(0);
      if (g.dim() == 2)
        i1 = (i1 % g.cells(1) + g.cells(1)) % g.cells(1);
    } else {
      if (i0 <= 0 || i0 >= g.cells(0))
        return -1;
      if (g.dim() == 2 && (i1 <= 0 || i1 >= g.cells(1)))
        return -1;
    }
    return static_cast<Eigen::Index>(g.index(i0, i1));
  };

  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const auto row = static_cast<Eigen::Index>(idx);
    if (g.is_boundary_node(idx)) {
      entries.emplace_back(row, row, 1.0);
      continue;
    }
    const int i0 = g.axis_index(idx, 0);
    const int i1 = g.axis_index(idx, 1);
    double diag = c.V()[idx] + c.Q()[idx];
    for (int axis = 0; axis < g.dim(); ++axis) {
      const double w = 1.0 / (g.spacing(axis) * g.spacing(axis));
      diag += 2.0 * w;
      const int e0 = axis == 0 ? 1 : 0;
      const int e1 = axis == 1 ? 1 : 0;
      for (int dir : {-1, 1}) {
        const Eigen::Index col = neighbor(i0 + dir * e0, i1 + dir * e1);
        if (col >= 0)
          entries.emplace_back(row, col, -w); // duplicates sum when cells(axis) == 2
      }
    }
    entries.emplace_back(row, row, diag);
  }

  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  impl_->factor.compute(a);
  if (impl_->factor.info() != Eigen::Success)
    throw Error("energy-norm Gram matrix factorization failed");
}

RieszMap::~RieszMap() = default;
RieszMap::RieszMap(RieszMap &&) noexcept = default;
RieszMap &RieszMap::operator=(RieszMap &&) noexcept = default;

Field RieszMap::apply_inverse(const Field &g) const {
  require_same_grid(g.grid(), impl_->grid);
  Eigen::Map<const Eigen::VectorXd> rhs(g.values().data(), static_cast<Eigen::Index>(g.size()));
  Eigen::VectorXd sol = impl_->factor.solve(rhs);
  Field out(impl_->grid, std::vector<double>(sol.data(), sol.data() + sol.size()));
  apply_boundary(out);
  return out;
}

} // namespace logsol
