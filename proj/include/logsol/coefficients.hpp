#pragma once

#include "logsol/lattice.hpp"

#include <array>
#include <string>
#include <vector>

namespace logsol {

/// One Fourier mode amplitude * trig(2π k·x + phase) with integer k.
struct Mode {
  enum class Kind { Cos, Sin };
  Kind kind = Kind::Cos;
  double amplitude = 0.0;
  std::array<double, 2> frequency{1.0, 0.0};
  double phase = 0.0;

  bool operator==(const Mode &) const = default;
};

/// constant + sum of modes; 1-periodic when every frequency is an integer.
struct Profile {
  double constant = 0.0;
  std::vector<Mode> modes;

  double operator()(double x0, double x1) const;
  bool operator==(const Profile &) const = default;
};

struct CoefficientDescriptor {
  std::string name;
  Profile V;
  Profile Q;

  /// V ≡ v0, Q ≡ q0.
  static CoefficientDescriptor constant(double v0, double q0);
  /// V = 0.2 sin(2πx), Q = 1 + 0.3 cos(2πx), the periodic test landscape.
  static CoefficientDescriptor periodic_test();

  bool is_constant() const { return V.modes.empty() && Q.modes.empty(); }
  bool operator==(const CoefficientDescriptor &) const = default;
};

/// Sampled V and Q satisfying min Q > 0 and min (V + Q) > 0.
class Coefficients {
public:
  const Grid &grid() const { return V_.grid(); }
  const Field &V() const { return V_; }
  const Field &Q() const { return Q_; }
  const CoefficientDescriptor &descriptor() const { return descriptor_; }

  double min_Q() const { return min_q_; }
  double max_Q() const { return max_q_; }
  double min_V_plus_Q() const { return min_vq_; }

private:
  friend Coefficients make_coefficients(const CoefficientDescriptor &, const Grid &);
  Coefficients(Field V, Field Q, CoefficientDescriptor d);

  Field V_;
  Field Q_;
  CoefficientDescriptor descriptor_;
  double min_q_ = 0.0;
  double max_q_ = 0.0;
  double min_vq_ = 0.0;
};

/// Samples and validates. On periodic grids one unit cell is sampled and tiled,
/// so the sampled fields are exactly invariant under integer shifts.
///
/// Throws PeriodicityViolation for non-integer frequencies and
/// PositivityViolation when min Q <= 0 or min (V + Q) <= 0 on the grid.
Coefficients make_coefficients(const CoefficientDescriptor &d, const Grid &grid);

} // namespace logsol
