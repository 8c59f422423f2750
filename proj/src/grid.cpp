#include "vflab/grid.hpp"

#include <unsupported/Eigen/FFT>

namespace vflab {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::FFT<Real>& fft_engine() {
  thread_local Eigen::FFT<Real> fft;
  return fft;
}

}  // namespace

GridSpec::GridSpec(int n, Real half_len) : n_points(n), half_length(half_len) {
  if (n < 16 || !is_power_of_two(n))
    throw std::invalid_argument("GridSpec: n_points must be a power of two >= 16");
  if (!(half_len > 0.0) || !std::isfinite(half_len))
    throw std::invalid_argument("GridSpec: half_length must be positive and finite");
}

RealVector GridSpec::coordinates() const {
  RealVector xs(n_points);
  for (int j = 0; j < n_points; ++j) xs[j] = x(j);
  return xs;
}

RealVector GridSpec::frequencies() const {
  RealVector xis(n_points);
  for (int m = 0; m < n_points; ++m) xis[m] = frequency(m);
  return xis;
}

ComplexField::ComplexField(GridSpec g, ComplexVector v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.n_points)
    throw std::invalid_argument("ComplexField: sample count does not match grid");
}

ComplexField make_field(const GridSpec& grid,
                        const std::function<Complex(Real)>& f) {
  ComplexVector v(grid.n_points);
  for (int j = 0; j < grid.n_points; ++j) v[j] = f(grid.x(j));
  return ComplexField(grid, std::move(v));
}

// The grid starts at x_0 = -L, so e^{-iξ_k x_j} = (-1)^k e^{-2πi jk/n};
// the sign folds into the modes as (-1)^m (m ≡ k mod 2 since n is even).
SpectrumField to_spectrum(const ComplexField& f) {
  const int n = f.grid.n_points;
  ComplexVector raw(n);
  fft_engine().fwd(raw, f.values);
  const Real h = f.grid.spacing();
  ComplexVector modes(n);
  for (int m = 0; m < n; ++m) modes[m] = (m % 2 == 0 ? h : -h) * raw[m];
  return SpectrumField{f.grid, std::move(modes)};
}

ComplexField to_field(const SpectrumField& s) {
  const int n = s.grid.n_points;
  const Real inv_h = 1.0 / s.grid.spacing();
  ComplexVector raw(n);
  for (int m = 0; m < n; ++m)
    raw[m] = (m % 2 == 0 ? inv_h : -inv_h) * s.modes[m];
  ComplexVector vals(n);
  fft_engine().inv(vals, raw);
  return ComplexField(s.grid, std::move(vals));
}

}  // namespace vflab
