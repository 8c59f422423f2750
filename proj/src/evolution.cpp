#include "vflab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vflab/numerics.hpp"
#include "vflab/spectral.hpp"

namespace vflab {

ComplexVector PerturbationSpec::build(const GridSpec& grid) const {
  ComplexVector u1 = ComplexVector::Zero(grid.n_points);
  switch (family) {
    case Family::none:
      break;
    case Family::gaussian_bump:
      for (int j = 0; j < grid.n_points; ++j) {
        const Real x = grid.x(j);
        const Real arg = (x - center) / width;
        u1[j] = amplitude * std::exp(-arg * arg) * std::polar(1.0, phase);
      }
      break;
    case Family::modulated_gaussian:
      for (int j = 0; j < grid.n_points; ++j) {
        const Real x = grid.x(j);
        const Real arg = (x - center) / width;
        u1[j] = amplitude * std::exp(-arg * arg) *
                std::polar(1.0, wavenumber * (x - center) + phase);
      }
      break;
    case Family::custom:
      if (custom_samples.size() != grid.n_points)
        throw std::invalid_argument("PerturbationSpec: custom sample count mismatch");
      u1 = custom_samples;
      break;
  }
  const int j0 = grid.n_points / 2;  // x = 0
  const Real scale = u1.size() ? u1.cwiseAbs().maxCoeff() : 0.0;
  if (std::abs(u1[j0].imag()) > 1e-12 * std::max(scale, 1e-300))
    throw std::invalid_argument("PerturbationSpec: u1(0) must be real");
  return u1;
}

Real mass_defect(const ComplexField& v, Real a) {
  Real acc = 0;
  for (int j = 0; j < v.values.size(); ++j)
    acc += std::norm(v.values[j]) - a * a;
  return acc * v.grid.spacing();
}

// E = ½∫|v_x|² - (1/8t)∫(|v|²-a²)², whose production rate along the flow is
// (1/8t²)∫(|v|²-a²)². The 1/8 weights are the ones that close the identity
// d/dt E = production for the equation solved here (a 1/4-weighted quartic
// term leaves an uncancelled ∂_t-quartic remainder).
EnergyDiagnostic energy(const FieldState& state, Real a) {
  const ComplexField vx = spectral_derivative(state.v, 1);
  Real quartic = 0;
  for (int j = 0; j < state.v.values.size(); ++j) {
    const Real d = std::norm(state.v.values[j]) - a * a;
    quartic += d * d;
  }
  quartic *= state.v.grid.spacing();
  const Real kinetic = 0.5 * state.v.grid.spacing() * vx.values.squaredNorm();
  EnergyDiagnostic out;
  out.t = state.t;
  out.energy = kinetic - quartic / (8.0 * state.t);
  out.production = quartic / (8.0 * state.t * state.t);
  return out;
}

std::vector<Real> energy_identity_residuals(const std::vector<FieldState>& states,
                                            Real a) {
  if (states.size() < 3)
    throw std::invalid_argument("energy_identity_residuals: need >= 3 states");
  std::vector<EnergyDiagnostic> diags;
  diags.reserve(states.size());
  for (const auto& s : states) diags.push_back(energy(s, a));
  std::vector<Real> out;
  out.reserve(states.size() - 2);
  for (std::size_t k = 1; k + 1 < states.size(); ++k) {
    const Real dedt = (diags[k + 1].energy - diags[k - 1].energy) /
                      (diags[k + 1].t - diags[k - 1].t);
    const Real resid = dedt - diags[k].production;
    out.push_back(resid / std::max(std::abs(diags[k].energy), 1e-12));
  }
  return out;
}

namespace {

DiagnosticsRow diagnostics_row(const FieldState& state, Real a) {
  DiagnosticsRow row;
  row.t = state.t;
  row.mass_q = mass_defect(state.v, a);
  const EnergyDiagnostic e = energy(state, a);
  row.energy = e.energy;
  row.production = e.production;
  row.j_norm = j_norm(state, a);
  const int n = state.v.grid.n_points;
  const int edge = std::max(1, n / 50);
  Real bmax = 0;
  for (int j = 0; j < edge; ++j) {
    bmax = std::max(bmax, std::abs(state.v.values[j] - a));
    bmax = std::max(bmax, std::abs(state.v.values[n - 1 - j] - a));
  }
  row.boundary_max = bmax;
  return row;
}

// v <- v · exp(i (|v|²-a²) Δ), the exact flow of the potential substep;
// Δ carries the exactly integrated time factor ∫ dt'/(2t').
void phase_substep(ComplexVector& v, Real a, Real dlog) {
  for (int j = 0; j < v.size(); ++j) {
    const Real pot = std::norm(v[j]) - a * a;
    v[j] *= std::polar(1.0, pot * dlog);
  }
}

}  // namespace

Trajectory evolve(const EvolutionConfig& config) {
  if (!(config.t_start >= 1.0))
    throw std::invalid_argument("evolve: t_start must be >= 1");
  if (!(config.t_end > config.t_start) || config.t_end > 1e4)
    throw std::invalid_argument("evolve: need t_start < t_end <= 1e4");
  if (!(config.dt > 0)) throw std::invalid_argument("evolve: dt must be positive");

  ComplexVector u1 = config.perturbation.build(config.grid);
  if (!u1.allFinite())
    throw std::invalid_argument("evolve: initial perturbation has non-finite samples");
  if (config.a > 0 && config.nonlinear) {
    const Real small = xgamma_norm(ComplexField(config.grid, u1), 1.0, config.gamma);
    if (small > config.smallness_factor * config.a) {
      std::ostringstream msg;
      msg << "evolve: perturbation size " << small << " in X_1^gamma exceeds "
          << config.smallness_factor << "*a = " << config.smallness_factor * config.a;
      throw std::invalid_argument(msg.str());
    }
  }

  std::vector<Real> outputs = config.output_times;
  outputs.push_back(config.t_start);
  outputs.push_back(config.t_end);
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end(),
                            [](Real p, Real q) { return std::abs(p - q) < 1e-12; }),
                outputs.end());
  if (outputs.front() < config.t_start - 1e-12 ||
      outputs.back() > config.t_end + 1e-12)
    throw std::invalid_argument("evolve: output times outside [t_start, t_end]");

  Trajectory traj;
  traj.config = config;

  ComplexVector v(config.grid.n_points);
  for (int j = 0; j < config.grid.n_points; ++j) v[j] = config.a + u1[j];

  Real t = config.t_start;
  auto record = [&](Real at) {
    FieldState st{at, ComplexField(config.grid, v)};
    traj.diagnostics.push_back(diagnostics_row(st, config.a));
    traj.states.push_back(std::move(st));
  };
  std::size_t next_out = 0;
  if (std::abs(outputs[0] - t) < 1e-12) {
    record(t);
    ++next_out;
  }

  ComplexField work(config.grid, v);
  long steps_since_check = 0;
  while (next_out < outputs.size()) {
    const Real target = outputs[next_out];
    Real dt_nom = config.dt * std::pow(t, config.dt_growth);
    if (config.dt_cap > 0) dt_nom = std::min(dt_nom, config.dt_cap);
    const Real dt = std::min(dt_nom, target - t);

    if (config.nonlinear)
      phase_substep(v, config.a, 0.5 * std::log((t + 0.5 * dt) / t));
    work.values.swap(v);
    work = free_propagate(work, dt);
    v.swap(work.values);
    if (config.nonlinear)
      phase_substep(v, config.a, 0.5 * std::log((t + dt) / (t + 0.5 * dt)));
    t += dt;

    const bool at_target = target - t < 1e-12;
    if (++steps_since_check >= 64 || at_target) {
      steps_since_check = 0;
      if (!v.allFinite()) {
        traj.aborted = true;
        std::ostringstream msg;
        msg << "non-finite field detected at t = " << t;
        traj.abort_reason = msg.str();
        return traj;
      }
    }
    if (at_target) {
      t = target;
      record(t);
      ++next_out;
    }
  }
  return traj;
}

const FieldState& Trajectory::at_time(Real t) const {
  for (const auto& s : states)
    if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, t)) return s;
  throw std::out_of_range("Trajectory: no state stored at requested time");
}

FilamentSlice pseudoconformal_map(const FieldState& state) {
  if (!(state.t >= 1.0))
    throw std::invalid_argument("pseudoconformal_map: state.t must be >= 1");
  const Real t_phys = 1.0 / state.t;
  const GridSpec scaled(state.v.grid.n_points, state.v.grid.half_length * t_phys);
  const Real root = std::sqrt(t_phys);

  FilamentSlice slice;
  slice.t_phys = t_phys;
  ComplexVector env(scaled.n_points);
  for (int j = 0; j < scaled.n_points; ++j)
    env[j] = std::conj(state.v.values[j]) / root;
  slice.envelope = env;
  slice.envelope_deriv = spectral_derivative(ComplexField(scaled, env), 1).values;
  ComplexVector psi(scaled.n_points);
  for (int j = 0; j < scaled.n_points; ++j) {
    const Real x = scaled.x(j);
    psi[j] = std::polar(1.0, x * x / (4.0 * t_phys)) * env[j];
  }
  slice.psi = ComplexField(scaled, std::move(psi));
  return slice;
}

FieldState pseudoconformal_inverse(const FilamentSlice& slice) {
  const GridSpec& scaled = slice.psi.grid;
  const GridSpec original(scaled.n_points, scaled.half_length / slice.t_phys);
  const Real root = std::sqrt(slice.t_phys);
  ComplexVector v(scaled.n_points);
  for (int j = 0; j < scaled.n_points; ++j) {
    const Real x = scaled.x(j);
    v[j] = std::conj(root * std::polar(1.0, -x * x / (4.0 * slice.t_phys)) *
                     slice.psi.values[j]);
  }
  return FieldState{1.0 / slice.t_phys, ComplexField(original, std::move(v))};
}

namespace {

Real fractional_index(const GridSpec& g, Real x) {
  const Real pos = (x + g.half_length) / g.spacing();
  if (pos < 1.0 || pos > g.n_points - 2.0)
    throw std::out_of_range("FilamentSlice: x outside grid coverage");
  return pos;
}

}  // namespace

Complex psi_at(const FilamentSlice& slice, Real x) {
  const Real pos = fractional_index(slice.psi.grid, x);
  const Complex env = catmull_rom(slice.envelope, pos);
  return std::polar(1.0, x * x / (4.0 * slice.t_phys)) * env;
}

Complex psi_x_at(const FilamentSlice& slice, Real x) {
  const Real pos = fractional_index(slice.psi.grid, x);
  const Complex env = catmull_rom(slice.envelope, pos);
  const Complex denv = catmull_rom(slice.envelope_deriv, pos);
  const Complex in_phase = denv + kI * (x / (2.0 * slice.t_phys)) * env;
  return std::polar(1.0, x * x / (4.0 * slice.t_phys)) * in_phase;
}

ScatteringEstimate scattering_state(const Trajectory& traj,
                                    const std::vector<Real>& probe_times,
                                    Real gamma, Real delta) {
  if (probe_times.size() < 2)
    throw std::invalid_argument("scattering_state: need at least two probes");
  for (std::size_t k = 1; k < probe_times.size(); ++k)
    if (!(probe_times[k] > probe_times[k - 1]))
      throw std::invalid_argument("scattering_state: probe times must increase");
  if (probe_times.front() < 10.0)
    throw std::invalid_argument("scattering_state: probes must start at t >= 10");

  const Real a = traj.config.a;
  ScatteringEstimate est;
  est.probe_times = probe_times;
  est.reference_exponent = -(0.25 - gamma - delta);

  ComplexField prev;
  for (std::size_t k = 0; k < probe_times.size(); ++k) {
    const FieldState& st = traj.at_time(probe_times[k]);
    ComplexVector g(st.v.values.size());
    const Complex phase = std::polar(1.0, -0.5 * a * a * std::log(st.t));
    for (int j = 0; j < g.size(); ++j) g[j] = phase * (st.v.values[j] - a);
    ComplexField f =
        free_propagate(ComplexField(st.v.grid, std::move(g)), -(st.t - 1.0));
    if (k > 0) {
      ComplexField diff(f.grid, f.values - prev.values);
      est.cauchy_gaps.push_back(l2_norm(diff));
    }
    prev = std::move(f);
  }
  est.f_plus = prev;

  for (std::size_t k = 1; k < est.cauchy_gaps.size(); ++k)
    if (est.cauchy_gaps[k] > est.cauchy_gaps[k - 1]) est.gaps_monotone = false;

  std::vector<Real> lx, ly;
  for (std::size_t k = 0; k < est.cauchy_gaps.size(); ++k) {
    if (est.cauchy_gaps[k] <= 0) continue;
    lx.push_back(std::log(probe_times[k]));
    ly.push_back(std::log(est.cauchy_gaps[k]));
  }
  if (lx.size() >= 2) est.fitted_gap_exponent = fit_line(lx, ly).slope;
  return est;
}

Real j_norm(const FieldState& state, Real a) {
  const GridSpec& g = state.v.grid;
  ComplexVector u(g.n_points);
  for (int j = 0; j < g.n_points; ++j) u[j] = state.v.values[j] - a;
  const ComplexField ux = spectral_derivative(ComplexField(g, u), 1);
  ComplexVector ju(g.n_points);
  const Complex two_it = 2.0 * kI * state.t;
  for (int j = 0; j < g.n_points; ++j)
    ju[j] = g.x(j) * u[j] + two_it * ux.values[j];
  return l2_norm(ComplexField(g, std::move(ju)));
}

JNormSeries j_norm_series(const Trajectory& traj, Real fit_lo, Real fit_hi) {
  JNormSeries out;
  for (const auto& row : traj.diagnostics) {
    out.ts.push_back(row.t);
    out.norms.push_back(row.j_norm);
  }
  if (out.ts.empty()) return out;
  if (fit_hi <= fit_lo) {
    fit_hi = out.ts.back();
    fit_lo = fit_hi / 10.0;
  }
  out.fit_lo = fit_lo;
  out.fit_hi = fit_hi;
  std::vector<Real> lx, ly;
  for (std::size_t k = 0; k < out.ts.size(); ++k) {
    if (out.ts[k] < fit_lo || out.ts[k] > fit_hi) continue;
    if (out.norms[k] <= 0) continue;
    lx.push_back(std::log(out.ts[k]));
    ly.push_back(std::log(out.norms[k]));
  }
  if (lx.size() >= 2) out.fitted_exponent = fit_line(lx, ly).slope;
  return out;
}

}  // namespace vflab
