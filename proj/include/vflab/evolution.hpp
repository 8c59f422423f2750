#pragma once

#include <string>
#include <vector>

#include "vflab/grid.hpp"

namespace vflab {

/// Initial perturbation u1 of the renormalized field v(1) = a + u1.
/// The filament-function construction requires u1(0) to be real; build()
/// enforces it for every family.
struct PerturbationSpec {
  enum class Family { none, gaussian_bump, modulated_gaussian, custom };
  Family family = Family::none;
  Real amplitude = 0.0;
  Real width = 1.0;
  Real center = 0.0;
  Real phase = 0.0;       // constant phase factor e^{i phase}
  Real wavenumber = 0.0;  // modulated-gaussian: e^{i q (x-center)}
  ComplexVector custom_samples;

  ComplexVector build(const GridSpec& grid) const;
};

/// Parameters of one evolution of i v_t + v_xx + (1/2t)(|v|² - a²) v = 0
/// from t = 1. The step may grow as dt·t^dt_growth (capped) for long
/// horizons; accuracy, not stability, is what dt controls.
struct EvolutionConfig {
  Real a = 1.0;
  GridSpec grid{4096, 40.0 * kPi};
  Real t_start = 1.0;
  Real t_end = 10.0;
  Real dt = 1e-3;
  Real dt_growth = 0.0;
  Real dt_cap = 0.02;
  Real gamma = 0.0;             // exponent for the admission check
  Real smallness_factor = 0.1;  // ‖u1‖_{X_1^γ} <= factor · a
  bool nonlinear = true;
  PerturbationSpec perturbation;
  std::vector<Real> output_times;  // t_start and t_end are always included
};

struct FieldState {
  Real t = 1.0;
  ComplexField v;
};

struct DiagnosticsRow {
  Real t = 0;
  Real mass_q = 0;       // Q(v) = ∫(|v|² - a²) dx
  Real energy = 0;       // E(v)
  Real production = 0;   // (1/4t²)∫(|v|²-a²)² dx
  Real j_norm = 0;       // ‖(x + 2it∂_x)(v - a)‖_L²
  Real boundary_max = 0; // sup |v - a| over the outer 2% of the box
};

struct Trajectory {
  EvolutionConfig config;
  std::vector<FieldState> states;       // at the requested output times
  std::vector<DiagnosticsRow> diagnostics;
  bool aborted = false;
  std::string abort_reason;

  const FieldState& at_time(Real t) const;
};

Real mass_defect(const ComplexField& v, Real a);

struct EnergyDiagnostic {
  Real t = 0;
  Real energy = 0;
  Real production = 0;
};
EnergyDiagnostic energy(const FieldState& state, Real a);

/// Centered-difference residual of d/dt E = production, one value per
/// interior state, relative to max(|E|, 1e-12).
std::vector<Real> energy_identity_residuals(const std::vector<FieldState>& states,
                                            Real a);

/// Strang splitting: exact phase rotation for the (|v|²-a²)/2t potential
/// (time factor integrated exactly via log increments) around an exact
/// free-propagator step.
Trajectory evolve(const EvolutionConfig& config);

/// ψ(t_phys,·) = e^{ix²/(4 t_phys)}/√t_phys · conj(v)(1/t_phys, x/t_phys)
/// evaluated exactly on the t_phys-scaled grid. The slowly varying factor
/// (envelope) is carried alongside for precise off-node evaluation.
struct FilamentSlice {
  Real t_phys = 1.0;
  ComplexField psi;              // on the scaled grid
  ComplexVector envelope;        // ψ = e^{i x²/(4t)} envelope
  ComplexVector envelope_deriv;  // d(envelope)/dx on the scaled grid
};

FilamentSlice pseudoconformal_map(const FieldState& state);
FieldState pseudoconformal_inverse(const FilamentSlice& slice);

/// Envelope-interpolated ψ(x); refuses x outside the slice's grid coverage.
Complex psi_at(const FilamentSlice& slice, Real x);
Complex psi_x_at(const FilamentSlice& slice, Real x);

/// Scattering probe f₊(t) = e^{-i(t-1)∂_x²}[e^{-i(a²/2)log t} u(t)] and the
/// Cauchy gaps between successive probes.
struct ScatteringEstimate {
  std::vector<Real> probe_times;
  std::vector<Real> cauchy_gaps;  // ‖f₊(t_{k+1}) - f₊(t_k)‖, size-1 entries
  ComplexField f_plus;            // last probe
  Real fitted_gap_exponent = 0;
  Real reference_exponent = 0;  // -(1/4 - gamma - delta)
  bool gaps_monotone = true;
};

ScatteringEstimate scattering_state(const Trajectory& traj,
                                    const std::vector<Real>& probe_times,
                                    Real gamma = 0.0, Real delta = 0.01);

/// J(t)u = x·u + 2it·∂_x u with u = v - a.
Real j_norm(const FieldState& state, Real a);

struct JNormSeries {
  std::vector<Real> ts;
  std::vector<Real> norms;
  Real fitted_exponent = 0;  // log-log slope over [fit_lo, fit_hi]
  Real fit_lo = 0, fit_hi = 0;
};

/// Growth fit over [lo, hi]; defaults to the last decade of the series.
JNormSeries j_norm_series(const Trajectory& traj, Real fit_lo = 0,
                          Real fit_hi = 0);

}  // namespace vflab
