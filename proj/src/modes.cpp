#include "vflab/modes.hpp"

#include <algorithm>
#include <cmath>

namespace vflab {

ModeTrajectory integrate_linear_mode(Real a, Real xi, Real t0, Real t1,
                                     const ModeState& init, Real rtol) {
  if (!(t0 >= 1.0) || !(t1 > t0))
    throw std::invalid_argument("integrate_linear_mode: need 1 <= t0 < t1");
  const Real xi2 = xi * xi;
  const Real a2 = a * a;
  auto rhs = [xi2, a2](Real t, const ModeVec& z) -> ModeVec {
    ModeVec d;
    d[0] = xi2 * z[1];
    d[1] = (-xi2 + a2 / t) * z[0];
    return d;
  };
  ModeTrajectory traj;
  traj.a = a;
  traj.xi = xi;
  ModeVec z0;
  z0 << init.X, init.Y;
  traj.path = integrate_dp54(rhs, t0, t1, z0, rtol);
  return traj;
}

ModeTrajectory j_forced_mode(Real a, Real xi, Real t0, Real t1,
                             const ModeTrajectory& w, const ModeState& init_v,
                             Real rtol) {
  if (w.path.ts.empty())
    throw std::invalid_argument("j_forced_mode: empty w-trajectory");
  if (t0 < w.t_begin() - 1e-12 || t1 > w.t_end() + 1e-12)
    throw std::invalid_argument("j_forced_mode: w-trajectory does not cover [t0, t1]");
  // refuse interpolation across holes: the stepper never grows the step by
  // more than 2x, so a gap much larger than both neighbours marks removed
  // nodes rather than normal adaptation
  std::vector<Real> gaps;
  for (std::size_t k = 1; k < w.path.ts.size(); ++k)
    gaps.push_back(w.path.ts[k] - w.path.ts[k - 1]);
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    Real neighbour = 0;
    if (k > 0) neighbour = std::max(neighbour, gaps[k - 1]);
    if (k + 1 < gaps.size()) neighbour = std::max(neighbour, gaps[k + 1]);
    const Real lo = w.path.ts[k], hi = w.path.ts[k + 1];
    if (neighbour > 0 && gaps[k] > 2.5 * neighbour && lo < t1 && hi > t0)
      throw std::invalid_argument("j_forced_mode: gap in w samples exceeds two nodes");
  }

  const Real xi2 = xi * xi;
  const Real a2 = a * a;
  const Complex force = 2.0 * kI * a2 * xi;
  auto rhs = [&, xi2, a2, force](Real t, const ModeVec& z) -> ModeVec {
    const ModeVec wz = w.path.eval(t);
    ModeVec d;
    d[0] = xi2 * z[1] - force * wz[0];
    d[1] = (-xi2 + a2 / t) * z[0] + force * wz[1];
    return d;
  };
  ModeTrajectory traj;
  traj.a = a;
  traj.xi = xi;
  ModeVec z0;
  z0 << init_v.X, init_v.Y;
  traj.path = integrate_dp54(rhs, t0, t1, z0, rtol);
  return traj;
}

DiagonalizedState diagonalized_variables(const ModeState& state, Real a) {
  const Real anchor = 2.0 * a * a;
  if (state.t < anchor)
    throw std::invalid_argument("diagonalized_variables: t below 2a² (alpha complex)");
  DiagonalizedState out;
  out.t = state.t;
  out.alpha = std::sqrt(1.0 - a * a / state.t);
  std::function<Real(Real)> alpha_fn = [a](Real s) {
    return std::sqrt(std::max(0.0, 1.0 - a * a / s));
  };
  out.phi = state.t > anchor
                ? adaptive_simpson(alpha_fn, anchor, state.t, 1e-13)
                : 0.0;
  const Complex rot = std::polar(1.0, -out.phi);
  const Complex half_x = 0.5 * state.X;
  const Complex skew = kI / (2.0 * out.alpha) * state.Y;
  out.A2 = rot * (half_x - skew);
  out.B2 = std::conj(rot) * (half_x + skew);
  return out;
}

Real alpha_phase_closed_form(Real a, Real t) {
  if (a == 0.0) return t;  // anchor at 0
  auto antideriv = [a](Real s) {
    const Real alpha = std::sqrt(1.0 - a * a / s);
    return s * alpha - 0.5 * a * a * std::log((1.0 + alpha) / (1.0 - alpha));
  };
  return antideriv(t) - antideriv(2.0 * a * a);
}

std::vector<Real> log_frequency_grid(Real lo, Real hi, int points_per_decade) {
  std::vector<Real> xis;
  const Real decades = std::log10(hi / lo);
  const int n = static_cast<int>(std::ceil(decades * points_per_decade));
  for (int k = 0; k <= n; ++k)
    xis.push_back(lo * std::pow(10.0, decades * k / n));
  return xis;
}

namespace {

int regime_of(Real xi2_t, Real eps, Real two_a2) {
  if (xi2_t <= eps) return 0;
  if (xi2_t <= two_a2) return 1;
  return 2;
}

}  // namespace

GrowthStudy mode_growth_fit(Real a, Real delta,
                            const std::vector<Real>& xis, Real t0, Real t1,
                            const std::function<ModeState(Real)>& init,
                            Real regime_epsilon) {
  if (!(delta > 0.0) || delta > 0.25)
    throw std::invalid_argument("mode_growth_fit: delta must lie in (0, 1/4]");
  GrowthStudy study;
  study.a = a;
  study.delta = delta;
  study.t0 = t0;
  study.t1 = t1;
  study.regime_epsilon =
      regime_epsilon > 0 ? regime_epsilon : std::min(1.0, a * a) / 4.0;
  const Real two_a2 = 2.0 * a * a;
  // beyond xi²t >= settle the diagonalized system certifies the tail
  const Real settle = std::max(50.0, 12.0 * a * a);

  std::vector<Real> hi_log_t, hi_log_env;

  for (Real xi : xis) {
    const ModeState z0 = init(xi);
    const Real denom =
        mode_magnitude_plus(z0.X, z0.Y) + mode_magnitude_minus(z0.X, z0.Y);
    if (denom <= 0)
      throw std::invalid_argument("mode_growth_fit: zero initial mode");

    Real t_cap = t1;
    bool certified = false;
    if (xi > 0) {
      const Real reach = settle / (xi * xi);
      if (reach < t1) {
        t_cap = std::max(std::min(4.0 * t0, t1), reach);
        certified = t_cap < t1;
      }
    }
    ModeTrajectory traj = integrate_linear_mode(a, xi, t0, t_cap, z0);

    ModeGrowthRow row;
    row.xi = xi;
    row.t_cap = t_cap;
    row.tail_certified = certified;

    auto ratio_at = [&](Real t, const ModeVec& z) {
      const Real mag = std::max(mode_magnitude_plus(z[0], z[1]),
                                mode_magnitude_minus(z[0], z[1]));
      return mag / (std::pow(t / t0, delta) * denom);
    };

    const std::size_t n_nodes = traj.path.ts.size();
    const std::size_t stride = std::max<std::size_t>(1, n_nodes / 400);
    const std::size_t sample_stride = std::max<std::size_t>(1, n_nodes / 40);
    for (std::size_t k = 0; k < n_nodes; k += stride) {
      const Real t = traj.path.ts[k];
      const ModeVec& z = traj.path.ys[k];
      const Real r = ratio_at(t, z);
      Real* slot = nullptr;
      switch (regime_of(xi * xi * t, study.regime_epsilon, two_a2)) {
        case 0: slot = &row.sup_ratio_low; break;
        case 1: slot = &row.sup_ratio_mid; break;
        default: slot = &row.sup_ratio_high; break;
      }
      *slot = std::max(*slot, r);
      if (k % sample_stride == 0)
        study.samples.push_back({xi, t, std::abs(z[0]), std::abs(z[1]), r,
                                 regime_of(xi * xi * t, study.regime_epsilon,
                                           two_a2)});
    }

    if (certified) {
      // rigorous tail bound from the diagonalized system:
      // |ŵ(t,ξ)| <= 2√2 e^{a²/(ξ² t_cap)} max(|ŵ(t_cap,±ξ)|) for t >= t_cap,
      // and the (t/t0)^δ envelope only grows, so the tail sup is bounded by
      // the ratio at t_cap inflated by that constant. At a = 0 the modulus
      // is conserved exactly and no inflation is needed.
      const ModeVec zc = traj.path.ys.back();
      const Real inflate =
          a == 0.0 ? 1.0
                   : 2.0 * std::numbers::sqrt2 *
                         std::exp(a * a / (xi * xi * t_cap));
      row.certified_tail_ratio = inflate * ratio_at(t_cap, zc);
    }

    // envelope data for the high-frequency exponent fit
    if (xi * xi * t0 >= std::max(two_a2, 1e-12)) {
      const int bins = 24;
      for (int b = 0; b < bins; ++b) {
        const Real ta = t0 * std::pow(t_cap / t0, Real(b) / bins);
        const Real tb = t0 * std::pow(t_cap / t0, Real(b + 1) / bins);
        Real env = 0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
          const Real t = traj.path.ts[k];
          if (t < ta || t > tb) continue;
          const ModeVec& z = traj.path.ys[k];
          env = std::max(env, std::max(mode_magnitude_plus(z[0], z[1]),
                                       mode_magnitude_minus(z[0], z[1])));
        }
        if (env > 0) {
          hi_log_t.push_back(std::log(0.5 * (ta + tb)));
          hi_log_env.push_back(std::log(env / denom));
        }
      }
    }

    study.rows.push_back(row);
    study.sup_low = std::max(study.sup_low, row.sup_ratio_low);
    study.sup_mid = std::max(study.sup_mid, row.sup_ratio_mid);
    study.sup_high = std::max(study.sup_high, row.sup_ratio_high);
    if (certified)
      study.sup_certified = std::max(study.sup_certified, row.certified_tail_ratio);
  }

  if (hi_log_t.size() >= 8)
    study.high_regime_exponent = fit_line(hi_log_t, hi_log_env).slope;
  return study;
}

}  // namespace vflab
