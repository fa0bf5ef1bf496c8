#include "logsol/spectral.hpp"

#include "logsol/exact_sum.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <numbers>
#include <vector>

namespace logsol {

namespace {

// Differentiates every line of `values` along `axis` in place.
void differentiate_lines(const Grid &g, int axis, std::vector<double> &values) {
  const int n = g.cells(axis);
  const int lines = g.dim() == 2 ? g.cells(1 - axis) : 1;
  const double two_pi_over_l = 2.0 * std::numbers::pi / g.box_length(axis);

  // Multiplier (2πik/L) e^{iπk/n} for the signed wavenumber k; k = n/2 stays
  // positive so the Nyquist mode maps to -(πn/L) X, a real coefficient.
  std::vector<std::complex<double>> multiplier(n);
  for (int j = 0; j < n; ++j) {
    const int k = 2 * j <= n ? j : j - n;
    const double phase = std::numbers::pi * k / n;
    multiplier[j] = std::complex<double>(0.0, two_pi_over_l * k) *
                    std::complex<double>(std::cos(phase), std::sin(phase));
  }

  Eigen::FFT<double> fft;
  std::vector<double> line(n), out(n);
  std::vector<std::complex<double>> spectrum;
  for (int l = 0; l < lines; ++l) {
    auto at = [&](int i) -> double & {
      return values[axis == 0 ? g.index(i, l) : g.index(l, i)];
    };
    for (int i = 0; i < n; ++i)
      line[i] = at(i);
    fft.fwd(spectrum, line);
    for (int j = 0; j < n; ++j)
      spectrum[j] *= multiplier[j];
    fft.inv(out, spectrum);
    for (int i = 0; i < n; ++i)
      at(i) = out[i];
  }
}

} // namespace

std::array<Field, 2> staggered_derivatives(const Field &u) {
  const Grid &g = u.grid();
  std::vector<double> x(u.values().begin(), u.values().end());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (g.is_boundary_node(i))
      x[i] = 0.0;
  std::array<Field, 2> out{Field(g), Field(g)};
  for (int axis = 0; axis < g.dim(); ++axis) {
    std::vector<double> d = x;
    differentiate_lines(g, axis, d);
    std::copy(d.begin(), d.end(), out[axis].values().begin());
  }
  return out;
}

double spectral_gradient_sq(const Field &u) {
  const auto d = staggered_derivatives(u);
  const Grid &g = u.grid();
  ExactSum acc;
  for (int axis = 0; axis < g.dim(); ++axis)
    for (double v : d[axis].values())
      acc.add(v * v);
  return acc.value() * g.cell_volume();
}

} // namespace logsol
