#pragma once

#include <vector>

#include "vflab/types.hpp"

namespace vflab {

/// Curvature parameter of the self-similar family (curvature a, torsion s/2).
struct SelfSimilarParams {
  Real a = 1.0;

  explicit SelfSimilarParams(Real a_) : a(a_) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw std::invalid_argument("SelfSimilarParams: a must be >= 0");
  }
};

/// Position and Frenet frame of the profile curve at one arclength node.
struct FrenetState {
  Real s = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 tangent = Vec3::UnitX();
  Vec3 normal = Vec3::UnitY();
  Vec3 binormal = Vec3::UnitZ();

  Mat3 frame() const {
    Mat3 f;
    f.row(0) = tangent;
    f.row(1) = normal;
    f.row(2) = binormal;
    return f;
  }
};

/// Profile curve integrated on a symmetric arclength grid [-S, S].
struct ProfileSolution {
  SelfSimilarParams params{1.0};
  Real step = 0.0;
  std::vector<FrenetState> states;  // ascending s, uniform spacing

  Real s_max() const { return states.back().s; }
  int node_index(Real s) const;  // nearest node
  const FrenetState& node(Real s) const { return states[node_index(s)]; }

  /// Cubic interpolation of position and frame at arbitrary s in range.
  FrenetState at(Real s) const;

  /// ½G - (s/2)T - a·b at a node (a first integral of the profile equation).
  Vec3 equation_residual(int node) const;

  /// Max one-step truncation error, estimated by step-halving at a few nodes.
  Real one_step_tolerance() const;
};

/// Integrate the Frenet system with curvature a and torsion s/2 from s=0
/// outward in both directions (classic RK4, polar re-orthonormalization
/// every 100 steps). Frame at s=0 is the identity, G(0) = (0,0,2a).
ProfileSolution integrate_profile(const SelfSimilarParams& params, Real s_hi,
                                  Real step = 1e-3);

/// Default integration span: max(200, 50/a + 100 a); 200 when a = 0.
Real default_profile_span(Real a);

/// Tangent and normal limits of the profile at s -> ±∞ and the corner angle.
struct AsymptoticFrameData {
  Vec3 a_plus = Vec3::UnitX();
  Vec3 a_minus = Vec3::UnitX();
  CVec3 b_plus = CVec3::Zero();
  CVec3 b_minus = CVec3::Zero();
  Real theta = 0.0;             // angle between a_plus and -a_minus
  Real extraction_error = 0.0;  // spread across window choices
};

/// Window-average the tails of T and of (n+ib)e^{i(s²/4 + a² log|s|)}, with
/// one Richardson refinement against the 1/s decay model.
AsymptoticFrameData extract_frame_limits(const ProfileSolution& sol);

/// sin(theta/2) - e^{-π a²/2}.
Real corner_angle_residual(const AsymptoticFrameData& data, Real a);

/// Rescaled evaluation χ_a(t,x) = √t G_a(x/√t) with its frame.
struct ChiSample {
  Vec3 chi;
  Vec3 tangent;
  Vec3 normal;
  Vec3 binormal;
};
std::vector<ChiSample> snapshot_chi_a(const ProfileSolution& sol, Real t,
                                      const std::vector<Real>& xs);

}  // namespace vflab
