#pragma once

#include <functional>
#include <stdexcept>

#include "vflab/types.hpp"

namespace vflab {

/// Uniform periodic grid on [-L, L) with n equispaced samples.
///
/// Fourier conventions used throughout: the transform approximates
/// f̂(ξ) = ∫ f(x) e^{-iξx} dx by the Riemann sum with factor `spacing`,
/// on the signed frequencies ξ_k = πk/L, k ∈ [-n/2, n/2). With these
/// conventions Parseval reads Σ|f_j|² h = Σ|f̂_k|² / (2L).
struct GridSpec {
  int n_points = 0;
  Real half_length = 0.0;

  GridSpec() = default;
  GridSpec(int n, Real half_len);

  Real spacing() const { return 2.0 * half_length / n_points; }
  Real x(int j) const { return -half_length + j * spacing(); }

  /// Signed mode number for storage index m (standard DFT layout).
  int mode_number(int m) const { return m < n_points / 2 ? m : m - n_points; }
  /// ξ_k = πk/L for storage index m.
  Real frequency(int m) const { return kPi * mode_number(m) / half_length; }

  RealVector coordinates() const;
  RealVector frequencies() const;

  bool operator==(const GridSpec& other) const = default;
};

/// Complex-valued function sampled on a GridSpec.
struct ComplexField {
  GridSpec grid;
  ComplexVector values;

  ComplexField() = default;
  ComplexField(GridSpec g, ComplexVector v);

  bool all_finite() const { return values.allFinite(); }
};

/// Fourier coefficients of a ComplexField, in storage (DFT) order.
struct SpectrumField {
  GridSpec grid;
  ComplexVector modes;
};

/// Sample a function on the grid.
ComplexField make_field(const GridSpec& grid,
                        const std::function<Complex(Real)>& f);

SpectrumField to_spectrum(const ComplexField& f);
ComplexField to_field(const SpectrumField& s);

}  // namespace vflab
