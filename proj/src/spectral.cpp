#include "vflab/spectral.hpp"

#include <cmath>

namespace vflab {

ComplexField spectral_derivative(const ComplexField& f, int order) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("spectral_derivative: order must be in [1, 4]");
  if (!f.all_finite())
    throw std::invalid_argument("spectral_derivative: input has non-finite samples");
  SpectrumField s = to_spectrum(f);
  const int n = f.grid.n_points;
  for (int m = 0; m < n; ++m) {
    if (order % 2 == 1 && f.grid.mode_number(m) == -n / 2) {
      s.modes[m] = 0.0;  // unpaired Nyquist mode
      continue;
    }
    Complex mult = std::pow(kI * f.grid.frequency(m), order);
    s.modes[m] *= mult;
  }
  return to_field(s);
}

ComplexField free_propagate(const ComplexField& f, Real dt) {
  if (!std::isfinite(dt))
    throw std::invalid_argument("free_propagate: dt must be finite");
  if (!f.all_finite())
    throw std::invalid_argument("free_propagate: input has non-finite samples");
  if (dt == 0.0) return f;
  SpectrumField s = to_spectrum(f);
  for (int m = 0; m < f.grid.n_points; ++m) {
    const Real xi = f.grid.frequency(m);
    s.modes[m] *= std::polar(1.0, -dt * xi * xi);
  }
  return to_field(s);
}

Real l2_norm(const ComplexField& f) {
  return std::sqrt(f.grid.spacing() * f.values.squaredNorm());
}

Real l2_norm(const SpectrumField& s) {
  return std::sqrt(s.modes.squaredNorm() / (2.0 * s.grid.half_length));
}

Real sup_norm(const ComplexField& f) {
  Real m = 0.0;
  for (int j = 0; j < f.values.size(); ++j) m = std::max(m, std::abs(f.values[j]));
  return m;
}

Real xgamma_norm(const ComplexField& f, Real t0, Real gamma) {
  if (!(t0 >= 1.0)) throw std::invalid_argument("xgamma_norm: t0 must be >= 1");
  if (gamma < 0.0 || gamma > 0.25)
    throw std::invalid_argument("xgamma_norm: gamma must be in [0, 1/4]");
  SpectrumField s = to_spectrum(f);
  Real low_sup = 0.0;
  for (int m = 0; m < f.grid.n_points; ++m) {
    const Real xi = f.grid.frequency(m);
    if (xi * xi > 1.0) continue;
    low_sup = std::max(low_sup, std::pow(std::abs(xi), 2.0 * gamma) * std::abs(s.modes[m]));
  }
  return std::pow(t0, -0.25) * l2_norm(f) + std::pow(t0, gamma - 0.5) * low_sup;
}

}  // namespace vflab
