#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "vflab/grid.hpp"
#include "vflab/numerics.hpp"
#include "vflab/spectral.hpp"

using namespace vflab;

namespace {

ComplexField random_field(const GridSpec& g, std::mt19937& rng) {
  std::normal_distribution<Real> dist;
  ComplexVector v(g.n_points);
  for (int j = 0; j < g.n_points; ++j) v[j] = Complex(dist(rng), dist(rng));
  return ComplexField(g, std::move(v));
}

Real rel_diff(const ComplexField& a, const ComplexField& b) {
  return (a.values - b.values).norm() / std::max(1e-300, b.values.norm());
}

}  // namespace

TEST_CASE("GridSpec construction rules") {
  CHECK_THROWS_AS(GridSpec(8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(48, 1.0), std::invalid_argument);   // not a power of two
  CHECK_THROWS_AS(GridSpec(64, -2.0), std::invalid_argument);
  GridSpec g(64, 5.0);
  CHECK(g.spacing() * g.n_points == 2.0 * g.half_length);  // exact: n is a power of two
  CHECK(g.x(0) == -5.0);
  CHECK(g.frequency(0) == 0.0);
  CHECK(g.mode_number(32) == -32);
  CHECK_THROWS_AS(ComplexField(g, ComplexVector::Zero(63)), std::invalid_argument);
}

TEST_CASE("spectral_derivative: on-grid plane wave is an eigenfunction") {
  GridSpec g(256, 10.0);
  const Real xi1 = g.frequency(7);
  auto f = make_field(g, [&](Real x) { return std::polar(1.0, xi1 * x); });
  auto df = spectral_derivative(f, 1);
  Real err = 0;
  for (int j = 0; j < g.n_points; ++j)
    err = std::max(err, std::abs(df.values[j] - kI * xi1 * f.values[j]));
  CHECK(err < 1e-10);
}

TEST_CASE("spectral_derivative: constant maps to zero") {
  GridSpec g(64, 3.0);
  auto f = make_field(g, [](Real) { return Complex(2.5, -1.0); });
  auto df = spectral_derivative(f, 1);
  CHECK(sup_norm(df) < 1e-13);
}

TEST_CASE("spectral_derivative: gaussian against the analytic derivative") {
  GridSpec g(1024, 20.0 * kPi);
  auto f = make_field(g, [](Real x) { return Complex(std::exp(-x * x), 0); });
  auto df = spectral_derivative(f, 1);
  Real err = 0;
  for (int j = 0; j < g.n_points; ++j) {
    const Real x = g.x(j);
    err = std::max(err, std::abs(df.values[j] - Complex(-2 * x * std::exp(-x * x), 0)));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("spectral_derivative: order bounds enforced") {
  GridSpec g(64, 3.0);
  auto f = make_field(g, [](Real x) { return Complex(std::sin(x), 0); });
  CHECK_THROWS_AS(spectral_derivative(f, 5), std::invalid_argument);
  CHECK_THROWS_AS(spectral_derivative(f, 0), std::invalid_argument);
}

TEST_CASE("free_propagate: dt = 0 is the identity") {
  GridSpec g(128, 8.0);
  std::mt19937 rng(11);
  auto f = random_field(g, rng);
  CHECK(rel_diff(free_propagate(f, 0.0), f) == 0.0);
}

TEST_CASE("free_propagate: unitary on L2") {
  GridSpec g(512, 30.0);
  std::mt19937 rng(5);
  auto f = random_field(g, rng);
  const Real n0 = l2_norm(f);
  const Real n1 = l2_norm(free_propagate(f, 3.7));
  CHECK(std::abs(n1 - n0) / n0 < 1e-12);
}

TEST_CASE("free_propagate: dispersed gaussian closed form") {
  // e^{i t d_xx} e^{-x^2/2} = (1+2it)^{-1/2} e^{-x^2/(2(1+2it))}
  GridSpec g(2048, 40.0 * kPi);
  auto f = make_field(g, [](Real x) { return Complex(std::exp(-0.5 * x * x), 0); });
  const Real dt = 1.0;
  auto evolved = free_propagate(f, dt);
  const Complex p(1.0, 2.0 * dt);
  Real err = 0;
  for (int j = 0; j < g.n_points; ++j) {
    const Real x = g.x(j);
    const Complex exact = std::exp(-0.5 * x * x / p) / std::sqrt(p);
    err = std::max(err, std::abs(evolved.values[j] - exact));
  }
  CHECK(err < 1e-8);
}

TEST_CASE("free_propagate: semigroup property") {
  GridSpec g(256, 12.0);
  std::mt19937 rng(17);
  auto f = random_field(g, rng);
  auto once = free_propagate(f, 0.9 + 0.4);
  auto twice = free_propagate(free_propagate(f, 0.9), 0.4);
  CHECK(rel_diff(once, twice) < 1e-11);
}

TEST_CASE("l2_norm basics") {
  GridSpec g(256, 7.0);
  CHECK(l2_norm(ComplexField(g, ComplexVector::Zero(g.n_points))) == 0.0);
  auto ones = make_field(g, [](Real) { return Complex(1, 0); });
  CHECK(l2_norm(ones) == doctest::Approx(std::sqrt(2.0 * g.half_length)).epsilon(1e-14));
}

TEST_CASE("l2_norm of e^{-x^2} equals (pi/2)^{1/4}") {
  GridSpec g(1024, 20.0 * kPi);
  auto f = make_field(g, [](Real x) { return Complex(std::exp(-x * x), 0); });
  CHECK(std::abs(l2_norm(f) - std::pow(kPi / 2.0, 0.25)) < 1e-8);
}

TEST_CASE("xgamma_norm: zero field and gamma = 0 collapse") {
  GridSpec g(512, 20.0);
  CHECK(xgamma_norm(ComplexField(g, ComplexVector::Zero(g.n_points)), 1.0, 0.0) == 0.0);

  auto f = make_field(g, [](Real x) { return Complex(std::exp(-x * x), 0.3 * std::exp(-2 * x * x)); });
  auto s = to_spectrum(f);
  Real sup = 0;
  for (int m = 0; m < g.n_points; ++m) {
    const Real xi = g.frequency(m);
    if (xi * xi <= 1.0) sup = std::max(sup, std::abs(s.modes[m]));
  }
  CHECK(xgamma_norm(f, 1.0, 0.0) ==
        doctest::Approx(l2_norm(f) + sup).epsilon(1e-13));
}

TEST_CASE("xgamma_norm: quadrature oracle for a gaussian bump") {
  GridSpec g(1024, 20.0 * kPi);
  auto fn = [](Real x) { return std::exp(-(x - 1.5) * (x - 1.5)); };
  auto f = make_field(g, [&](Real x) { return Complex(fn(x), 0); });

  // continuum Fourier transform at the grid's low frequencies by quadrature
  const Real gamma = 0.125, t0 = 1.0;
  Real sup = 0;
  for (int m = 0; m < g.n_points; ++m) {
    const Real xi = g.frequency(m);
    if (xi * xi > 1.0) continue;
    std::function<Complex(Real)> integrand = [&](Real x) {
      return fn(x) * std::polar(1.0, -xi * x);
    };
    const Complex hat = adaptive_simpson(integrand, -g.half_length, g.half_length, 1e-12);
    sup = std::max(sup, std::pow(std::abs(xi), 2 * gamma) * std::abs(hat));
  }
  std::function<Real(Real)> sq = [&](Real x) { return fn(x) * fn(x); };
  const Real l2 = std::sqrt(adaptive_simpson(sq, -g.half_length, g.half_length, 1e-14));
  const Real oracle = std::pow(t0, -0.25) * l2 + std::pow(t0, gamma - 0.5) * sup;

  const Real value = xgamma_norm(f, t0, gamma);
  CHECK(std::abs(value - oracle) / oracle < 1e-3);
}

TEST_CASE("xgamma_norm: domain checks") {
  GridSpec g(64, 4.0);
  auto f = make_field(g, [](Real x) { return Complex(std::exp(-x * x), 0); });
  CHECK_THROWS_AS(xgamma_norm(f, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(xgamma_norm(f, 1.0, 0.3), std::invalid_argument);
}

TEST_CASE("Parseval over random fields") {
  std::mt19937 rng(123);
  GridSpec g(256, 15.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_field(g, rng);
    const Real a = l2_norm(f);
    const Real b = l2_norm(to_spectrum(f));
    CHECK(std::abs(a - b) / a < 1e-12);
  }
}

TEST_CASE("transform round trip is the identity") {
  std::mt19937 rng(321);
  GridSpec g(512, 25.0);
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_field(g, rng);
    auto back = to_field(to_spectrum(f));
    CHECK((back.values - f.values).norm() < 10 * eps * f.values.norm() * std::sqrt(g.n_points));
    CHECK(rel_diff(back, f) < 1e-12);
  }
}
