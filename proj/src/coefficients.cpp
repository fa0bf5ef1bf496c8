#include "logsol/coefficients.hpp"

#include "logsol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace logsol {

double Profile::operator()(double x0, double x1) const {
  double v = constant;
  for (const Mode &m : modes) {
    const double arg =
        2.0 * std::numbers::pi * (m.frequency[0] * x0 + m.frequency[1] * x1) + m.phase;
    v += m.amplitude * (m.kind == Mode::Kind::Cos ? std::cos(arg) : std::sin(arg));
  }
  return v;
}

CoefficientDescriptor CoefficientDescriptor::constant(double v0, double q0) {
  CoefficientDescriptor d;
  d.name = "constant";
  d.V.constant = v0;
  d.Q.constant = q0;
  return d;
}

CoefficientDescriptor CoefficientDescriptor::periodic_test() {
  CoefficientDescriptor d;
  d.name = "periodic-test";
  d.V.modes.push_back({Mode::Kind::Sin, 0.2, {1.0, 0.0}, 0.0});
  d.Q.constant = 1.0;
  d.Q.modes.push_back({Mode::Kind::Cos, 0.3, {1.0, 0.0}, 0.0});
  return d;
}

namespace {

void check_integer_frequencies(const Profile &p, const char *which) {
  for (const Mode &m : p.modes)
    for (double k : m.frequency)
      if (k != std::floor(k) || !std::isfinite(k)) {
        std::ostringstream msg;
        msg << which << " has non-integer frequency " << k << "; coefficients must be 1-periodic";
        throw PeriodicityViolation(msg.str());
      }
}

Field sample(const Profile &p, const Grid &g) {
  Field f(g);
  if (!g.periodic()) {
    for (std::size_t i = 0; i < g.size(); ++i)
      f[i] = p(g.coordinate(i, 0), g.dim() == 2 ? g.coordinate(i, 1) : 0.0);
    return f;
  }
  const int c0 = g.cells_per_unit(0);
  const int c1 = g.dim() == 2 ? g.cells_per_unit(1) : 1;
  std::vector<double> cell(static_cast<std::size_t>(c0) * c1);
  for (int j = 0; j < c1; ++j)
    for (int i = 0; i < c0; ++i)
      cell[i + c0 * j] = p(g.coordinate(g.index(i, 0), 0),
                           g.dim() == 2 ? g.coordinate(g.index(0, j), 1) : 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const int i = g.axis_index(idx, 0) % c0;
    const int j = g.axis_index(idx, 1) % c1;
    f[idx] = cell[i + c0 * j];
  }
  return f;
}

} // namespace

Coefficients::Coefficients(Field V, Field Q, CoefficientDescriptor d)
    : V_(std::move(V)), Q_(std::move(Q)), descriptor_(std::move(d)) {
  min_q_ = std::numeric_limits<double>::infinity();
  max_q_ = -std::numeric_limits<double>::infinity();
  min_vq_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Q_.size(); ++i) {
    min_q_ = std::min(min_q_, Q_[i]);
    max_q_ = std::max(max_q_, Q_[i]);
    min_vq_ = std::min(min_vq_, V_[i] + Q_[i]);
  }
}

Coefficients make_coefficients(const CoefficientDescriptor &d, const Grid &grid) {
  check_integer_frequencies(d.V, "V");
  check_integer_frequencies(d.Q, "Q");
  Coefficients c(sample(d.V, grid), sample(d.Q, grid), d);
  if (!all_finite(c.V()) || !all_finite(c.Q()))
    throw InvalidArgument("coefficient samples are not finite");
  if (!(c.min_Q() > 0.0)) {
    std::ostringstream msg;
    msg << "min Q = " << c.min_Q() << " must be positive";
    throw PositivityViolation(msg.str());
  }
  if (!(c.min_V_plus_Q() > 0.0)) {
    std::ostringstream msg;
    msg << "min (V + Q) = " << c.min_V_plus_Q() << " must be positive";
    throw PositivityViolation(msg.str());
  }
  if (grid.periodic()) {
    for (int a = 0; a < grid.dim(); ++a) {
      std::array<int, 2> k{0, 0};
      k[a] = 1;
      if (!(shift(c.V(), k) == c.V()) || !(shift(c.Q(), k) == c.Q()))
        throw PeriodicityViolation("sampled coefficients are not 1-periodic");
    }
  }
  return c;
}

} // namespace logsol
