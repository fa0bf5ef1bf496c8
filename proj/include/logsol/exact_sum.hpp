#pragma once

#include <array>
#include <cstdint>

namespace logsol {

/// Order-independent exact accumulator for doubles.
///
/// Every finite double is a signed integer times a power of two, so a sum of
/// doubles can be held exactly in a wide fixed-point register. The register
/// here uses 32-bit digits stored in 64-bit limbs, which leaves headroom for
/// 2^30 additions between carry propagations. value() rounds the exact sum to
/// the nearest double once, so the result does not depend on the order of
/// add() calls or on how partial accumulators were merged. That is what makes
/// OpenMP reductions bit-identical to the serial loop.
class ExactSum {
public:
  ExactSum() = default;

  void add(double x);
  void merge(const ExactSum &other);

  ExactSum &operator+=(double x) {
    add(x);
    return *this;
  }

  /// Correctly rounded value of the accumulated sum (NaN/inf propagate).
  [[nodiscard]] double value() const;

private:
  static constexpr int kDigitBits = 32;
  // 2098 bits cover every finite double; two extra limbs absorb carries.
  static constexpr int kLimbs = 68;

  void normalize();

  std::array<std::int64_t, kLimbs> limbs_{};
  std::uint32_t pending_ = 0;
  double special_ = 0.0; // accumulates inf/nan inputs
};

} // namespace logsol
