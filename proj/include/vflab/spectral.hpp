#pragma once

#include "vflab/grid.hpp"

namespace vflab {

/// order-th derivative by frequency-domain multiplication with (iξ)^order.
/// The Nyquist mode is zeroed for odd orders. Orders above 4 are rejected.
ComplexField spectral_derivative(const ComplexField& f, int order);

/// e^{i dt ∂_x²}: mode k multiplied by e^{-i dt ξ_k²}. Unitary on L².
ComplexField free_propagate(const ComplexField& f, Real dt);

/// √(Σ|f_j|² · spacing).
Real l2_norm(const ComplexField& f);
/// Plancherel value √(Σ|f̂_k|² / 2L).
Real l2_norm(const SpectrumField& s);

Real sup_norm(const ComplexField& f);

/// ‖f‖_{X_{t0}^γ} = t0^{-1/4}‖f‖_{L²}
///                + t0^{γ-1/2} sup{ |ξ|^{2γ}|f̂(ξ)| : grid ξ with ξ² ≤ 1 }.
Real xgamma_norm(const ComplexField& f, Real t0, Real gamma);

}  // namespace vflab
