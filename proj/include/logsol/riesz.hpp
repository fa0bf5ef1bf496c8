#pragma once

#include "logsol/coefficients.hpp"

#include <memory>

namespace logsol {

/// Inverse of the energy-norm Gram operator -Δ_h + (V + Q).
///
/// Applying it to the L² residual gives the gradient with respect to
/// ‖u‖² = ∫|∇u|² + (V + Q)u², which makes descent steps mesh independent.
/// The sparse factorization is built once per coefficient set.
class RieszMap {
public:
  explicit RieszMap(const Coefficients &c);
  ~RieszMap();
  RieszMap(RieszMap &&) noexcept;
  RieszMap &operator=(RieszMap &&) noexcept;

  Field apply_inverse(const Field &g) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace logsol
