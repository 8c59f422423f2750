#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "vflab/types.hpp"

namespace vflab {

/// Rotation matrix exp([w]_x) (Rodrigues form, series fallback near 0).
Mat3 rotation_exp(const Vec3& w);

/// Replace R by the nearest rotation matrix (polar factor via SVD).
void polar_orthonormalize(Mat3& r);

/// Frobenius distance of R^T R from the identity.
Real orthonormality_defect(const Mat3& r);

/// Rotation Q minimizing Σ|Q a_i - b_i|² (Kabsch).
Mat3 procrustes_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

/// One classic fourth-order step for y' = f(t, y).
template <typename State, typename Rhs>
State rk4_step(const Rhs& f, Real t, const State& y, Real h) {
  State k1 = f(t, y);
  State k2 = f(t + 0.5 * h, State(y + 0.5 * h * k1));
  State k3 = f(t + 0.5 * h, State(y + 0.5 * h * k2));
  State k4 = f(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// Accepted-step record of an adaptive integration, with derivatives kept
/// for cubic Hermite evaluation between nodes.
template <typename State>
struct OdeTrajectory {
  std::vector<Real> ts;
  std::vector<State> ys;
  std::vector<State> dys;

  State eval(Real t) const {
    if (ts.empty()) throw std::runtime_error("OdeTrajectory: empty");
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
    const Real h = ts[i + 1] - ts[i];
    const Real u = (t - ts[i]) / h;
    const Real h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const Real h10 = u * (1 - u) * (1 - u);
    const Real h01 = u * u * (3 - 2 * u);
    const Real h11 = u * u * (u - 1);
    return State(h00 * ys[i] + (h10 * h) * dys[i] + h01 * ys[i + 1] +
                 (h11 * h) * dys[i + 1]);
  }
};

/// Adaptive Dormand-Prince 5(4) for y' = f(t, y) on Eigen vector states.
/// Error control: per-component |err| <= atol + rtol·|y|.
template <typename State, typename Rhs>
OdeTrajectory<State> integrate_dp54(const Rhs& f, Real t0, Real t1,
                                    const State& y0, Real rtol,
                                    Real atol = 1e-14, Real h_init = 0.0) {
  static const Real c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
  static const Real a21 = 1. / 5;
  static const Real a31 = 3. / 40, a32 = 9. / 40;
  static const Real a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
  static const Real a51 = 19372. / 6561, a52 = -25360. / 2187,
                    a53 = 64448. / 6561, a54 = -212. / 729;
  static const Real a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                    a64 = 49. / 176, a65 = -5103. / 18656;
  static const Real b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192,
                    b5 = -2187. / 6784, b6 = 11. / 84;
  static const Real e1 = 35. / 384 - 5179. / 57600,
                    e3 = 500. / 1113 - 7571. / 16695,
                    e4 = 125. / 192 - 393. / 640,
                    e5 = -2187. / 6784 + 92097. / 339200,
                    e6 = 11. / 84 - 187. / 2100, e7 = -1. / 40;

  if (!(t1 > t0)) throw std::invalid_argument("integrate_dp54: need t1 > t0");
  OdeTrajectory<State> out;
  State y = y0;
  State k1 = f(t0, y);
  Real t = t0;
  Real h = h_init > 0 ? h_init : (t1 - t0) * 1e-4;
  out.ts.push_back(t);
  out.ys.push_back(y);
  out.dys.push_back(k1);
  int rejects_in_a_row = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    State k5 = f(t + c5 * h,
                 State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    State k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                       a64 * k4 + a65 * k5)));
    State ynew = State(y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6));
    State k7 = f(t + h, ynew);
    State err = State(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                           e7 * k7));
    Real scale = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const Real tol = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      scale = std::max(scale, std::abs(err[i]) / tol);
    }
    if (scale <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      out.ts.push_back(t);
      out.ys.push_back(y);
      out.dys.push_back(k1);
      rejects_in_a_row = 0;
    } else if (++rejects_in_a_row > 60) {
      throw std::runtime_error("integrate_dp54: step size underflow (tolerance failure)");
    }
    const Real grow = scale > 0 ? 0.9 * std::pow(scale, -0.2) : 2.0;
    h *= std::clamp(grow, 0.2, 2.0);
    if (!(h > 0) || t + h == t)
      throw std::runtime_error("integrate_dp54: step size underflow (tolerance failure)");
  }
  return out;
}

/// Adaptive Simpson quadrature of a scalar (real or complex) integrand.
template <typename Value>
Value adaptive_simpson(const std::function<Value(Real)>& f, Real a, Real b,
                       Real tol, int max_depth = 48) {
  struct Rec {
    static Value go(const std::function<Value(Real)>& f, Real a, Real b,
                    Value fa, Value fm, Value fb, Value whole, Real tol,
                    int depth) {
      const Real m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const Value flm = f(lm), frm = f(rm);
      const Value left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const Value right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const Value delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
      return go(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             go(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const Value fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const Value whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::go(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Cumulative trapezoid of uniformly spaced samples, anchored at index j0.
RealVector cumulative_trapezoid(const RealVector& ys, Real h, int j0);

/// Catmull-Rom interpolation on uniformly spaced samples; `pos` is the
/// fractional index. Clamped to valid range at the ends.
Complex catmull_rom(const ComplexVector& v, Real pos);
Real catmull_rom(const RealVector& v, Real pos);

/// Least-squares line y = slope·x + intercept; returns {slope, intercept, rms}.
struct LineFit {
  Real slope = 0.0;
  Real intercept = 0.0;
  Real rms_residual = 0.0;
};
LineFit fit_line(const std::vector<Real>& xs, const std::vector<Real>& ys);

/// Least squares for y ≈ Σ c_k basis_k; returns coefficients.
RealVector fit_least_squares(const std::vector<RealVector>& basis_columns,
                             const RealVector& rhs);

}  // namespace vflab
