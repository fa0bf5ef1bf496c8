#include "logsol/spectral.hpp"

#include "../support/property.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace logsol;
using namespace logsol::testing;

namespace {

constexpr double kPi = std::numbers::pi;

Field sample(const Grid &g, double (*f)(double, double)) {
  Field u(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    u[i] = f(g.coordinate(i, 0), g.dim() == 2 ? g.coordinate(i, 1) : 0.0);
  return u;
}

} // namespace

TEST(Spectral, ExactOnResolvedModesAtHalfCells) {
  const Grid g = Grid::periodic_1d(48, 2);
  const Field u = sample(g, [](double x, double) { return std::sin(2 * kPi * 3 * x) + 0.5 * std::cos(2 * kPi * x); });
  const Field d = staggered_derivatives(u)[0];
  const double h = g.spacing(0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i, 0) + 0.5 * h;
    const double exact = 6 * kPi * std::cos(6 * kPi * x) - kPi * std::sin(2 * kPi * x);
    EXPECT_NEAR(d[i], exact, 1e-11);
  }
}

TEST(Spectral, NyquistModeKeepsItsEnergy) {
  // (-1)^i is cos(π x / h). Its derivative peaks at every half cell, so the
  // midpoint rule counts (π/h)² L, twice the continuum energy: an upper bound.
  const Grid g = Grid::periodic_1d(16, 1);
  Field u(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    u[i] = i % 2 == 0 ? 1.0 : -1.0;
  const double h = g.spacing(0);
  EXPECT_LE(rel_err(spectral_gradient_sq(u), (kPi / h) * (kPi / h)), 1e-14);
}

TEST(Spectral, GaussianGradientNormOnWideBox) {
  // ∫|d/dx e^{-x²/(2σ²)}|² = √π / (2σ).
  const Grid g = dirichlet_wide(16);
  for (double sigma : {0.3, 0.7, 1.0}) { // wider ones feel the walls at ±8
    Field u(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(i, 0);
      u[i] = std::exp(-x * x / (2 * sigma * sigma));
    }
    apply_boundary(u);
    EXPECT_LE(rel_err(spectral_gradient_sq(u), std::sqrt(kPi) / (2 * sigma)), 1e-12) << sigma;
  }
}

TEST(Spectral, TwoDimensionalProductMode) {
  const Grid g = periodic_2d(24, 2.0);
  const Field u = sample(g, [](double x, double y) { return std::sin(kPi * x) * std::cos(2 * kPi * y); });
  // ∫∫ (π cos πx cos 2πy)² + (2π sin πx sin 2πy)² over [0,2]² = π² + 4π².
  EXPECT_LE(rel_err(spectral_gradient_sq(u), 5 * kPi * kPi), 1e-12);
}

TEST(Spectral, ShiftInvariantAndQuadratic) {
  const Grid g = periodic_box8();
  for_all(10, 211, [&](Gen &gen) {
    const Field u = gen.smooth(g);
    const double k = gen.uniform(-3.0, 3.0);
    EXPECT_LE(rel_err(spectral_gradient_sq(k * u), k * k * spectral_gradient_sq(u)), 1e-13);
    EXPECT_LE(rel_err(spectral_gradient_sq(shift(u, {3, 0})), spectral_gradient_sq(u)), 1e-13);
  });
}

TEST(Spectral, AgreesWithForwardDifferencesToSecondOrder) {
  const Grid coarse = dirichlet_wide(16), fine = dirichlet_wide(32);
  auto gap = [](const Grid &g) {
    Field u(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(i, 0) - 0.4;
      u[i] = std::exp(-x * x);
    }
    apply_boundary(u);
    Field zero(g);
    const Coefficients c = make_coefficients(CoefficientDescriptor::constant(0.0, 1.0), g);
    // h1_norm_sq = ‖∇_h u‖² + ∫u² with V + Q = 1.
    return spectral_gradient_sq(u) - (h1_norm_sq(u, c) - inner(u, u));
  };
  const double r = gap(coarse) / gap(fine);
  EXPECT_GT(r, 3.5);
  EXPECT_LT(r, 4.5);
}
