#pragma once

#include <functional>
#include <vector>

#include "vflab/numerics.hpp"
#include "vflab/types.hpp"

namespace vflab {

/// One Fourier mode of the linearized flow: X = FT(Re w)(t,ξ),
/// Y = FT(Im w)(t,ξ). The pair also carries the -ξ mode, since
/// ŵ(ξ) = X + iY and ŵ(-ξ) = conj(X) + i conj(Y).
struct ModeState {
  Real xi = 0;
  Real t = 1;
  Complex X{0, 0};
  Complex Y{0, 0};
};

inline Real mode_magnitude_plus(const Complex& x, const Complex& y) {
  return std::abs(x + kI * y);
}
inline Real mode_magnitude_minus(const Complex& x, const Complex& y) {
  return std::abs(std::conj(x) + kI * std::conj(y));
}

using ModeVec = Eigen::Matrix<Complex, 2, 1>;

struct ModeTrajectory {
  Real a = 0;
  Real xi = 0;
  OdeTrajectory<ModeVec> path;  // accepted nodes with derivatives

  Real t_begin() const { return path.ts.front(); }
  Real t_end() const { return path.ts.back(); }
  ModeState at(Real t) const {
    const ModeVec z = path.eval(t);
    return ModeState{xi, t, z[0], z[1]};
  }
};

/// X' = ξ² Y,  Y' = (-ξ² + a²/t) X  on [t0, t1], adaptive with relative
/// tolerance rtol.
ModeTrajectory integrate_linear_mode(Real a, Real xi, Real t0, Real t1,
                                     const ModeState& init, Real rtol = 1e-10);

/// Forced system for v̂ = FT parts of J(t)w:
/// Xv' = ξ² Yv - 2ia²ξ Xw(t),  Yv' = (-ξ²+a²/t) Xv + 2ia²ξ Yw(t),
/// with (Xw, Yw) interpolated from a stored w-trajectory.
ModeTrajectory j_forced_mode(Real a, Real xi, Real t0, Real t1,
                             const ModeTrajectory& w, const ModeState& init_v,
                             Real rtol = 1e-10);

/// Diagonalized variables of the high-frequency analysis. Defined for
/// t >= 2a² (alpha real); Φ is the quadrature of alpha from the anchor 2a².
struct DiagonalizedState {
  Real t = 0;
  Real alpha = 1;
  Real phi = 0;
  Complex A2{0, 0};
  Complex B2{0, 0};
};
DiagonalizedState diagonalized_variables(const ModeState& state, Real a);

/// Closed form of ∫_{2a²}^t sqrt(1 - a²/s) ds (test oracle for phi).
Real alpha_phase_closed_form(Real a, Real t);

/// Growth study against the (t/t0)^delta envelope over a frequency grid,
/// bucketed by the three regimes ξ²t <= eps, eps < ξ²t <= 2a², ξ²t > 2a².
struct ModeGrowthRow {
  Real xi = 0;
  Real t_cap = 0;            // integration capped here (tail certified beyond)
  bool tail_certified = false;
  Real certified_tail_ratio = 0;
  Real sup_ratio_low = -1;   // -1: no samples in that regime
  Real sup_ratio_mid = -1;
  Real sup_ratio_high = -1;
};

struct ModeSample {
  Real xi, t, abs_x, abs_y, envelope_ratio;
  int regime;  // 0 low, 1 mid, 2 high
};

struct GrowthStudy {
  Real a = 0, delta = 0, t0 = 1, t1 = 1;
  Real regime_epsilon = 0;
  std::vector<ModeGrowthRow> rows;
  std::vector<ModeSample> samples;  // decimated, for export
  Real sup_low = -1, sup_mid = -1, sup_high = -1;  // observed ratios
  Real sup_certified = -1;  // rigorous tail bound beyond the caps
  Real high_regime_exponent = 0;  // envelope fit over modes high from t0 on
};

/// Default study frequencies: log-spaced, points_per_decade over [lo, hi].
std::vector<Real> log_frequency_grid(Real lo = 1e-3, Real hi = 10.0,
                                     int points_per_decade = 64);

GrowthStudy mode_growth_fit(
    Real a, Real delta, const std::vector<Real>& xis, Real t0, Real t1,
    const std::function<ModeState(Real xi)>& init, Real regime_epsilon = -1);

}  // namespace vflab
