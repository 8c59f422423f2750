#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vflab/numerics.hpp"
#include "vflab/profile.hpp"

using namespace vflab;

namespace {

const ProfileSolution& profile_a1() {
  static ProfileSolution sol = integrate_profile(SelfSimilarParams(1.0), 200.0);
  return sol;
}

}  // namespace

TEST_CASE("initial data: G(0) = (0,0,2a), identity frame") {
  const auto& sol = profile_a1();
  const FrenetState& mid = sol.node(0.0);
  CHECK(mid.position.isApprox(Vec3(0, 0, 2), 1e-14));
  CHECK(mid.tangent.isApprox(Vec3::UnitX(), 1e-14));
  CHECK(mid.normal.isApprox(Vec3::UnitY(), 1e-14));
  CHECK(mid.binormal.isApprox(Vec3::UnitZ(), 1e-14));
}

TEST_CASE("frame stays orthonormal and right-handed along the curve") {
  const auto& sol = profile_a1();
  for (std::size_t i = 0; i < sol.states.size(); i += 997) {
    const auto& fs = sol.states[i];
    CHECK(std::abs(fs.tangent.norm() - 1.0) < 1e-9);
    CHECK(std::abs(fs.normal.norm() - 1.0) < 1e-9);
    CHECK(std::abs(fs.binormal.norm() - 1.0) < 1e-9);
    CHECK(std::abs(fs.tangent.dot(fs.normal)) < 1e-9);
    CHECK(std::abs(fs.tangent.dot(fs.binormal)) < 1e-9);
    CHECK(std::abs(fs.normal.dot(fs.binormal)) < 1e-9);
    CHECK((fs.binormal - fs.tangent.cross(fs.normal)).norm() < 1e-9);
  }
}

TEST_CASE("torsion coefficient tau = s/2 enters the step (check at s = 2)") {
  // b' = -(s/2) n: finite difference of the computed binormal at s=2
  const auto& sol = profile_a1();
  const int i = sol.node_index(2.0);
  const Real h = sol.step;
  const Vec3 db = (sol.states[i + 1].binormal - sol.states[i - 1].binormal) / (2 * h);
  const Vec3 expected = -1.0 * sol.states[i].normal;  // tau(2) = 1
  CHECK((db - expected).norm() < 1e-5);
  // T' = c n with c = a = 1
  const Vec3 dt = (sol.states[i + 1].tangent - sol.states[i - 1].tangent) / (2 * h);
  CHECK((dt - sol.states[i].normal).norm() < 1e-5);
}

TEST_CASE("profile equation residual stays small (a = 0.5, span 200)") {
  auto sol = integrate_profile(SelfSimilarParams(0.5), 200.0);
  Real worst = 0;
  for (std::size_t i = 0; i < sol.states.size(); i += 211)
    worst = std::max(worst, sol.equation_residual(static_cast<int>(i)).norm());
  CHECK(worst < 1e-6);
  CHECK(worst <= 10.0 * std::max(sol.one_step_tolerance(), 1e-12));
}

TEST_CASE("G' = T by high-order finite differences") {
  const auto& sol = profile_a1();
  const Real h = sol.step;
  Real worst = 0;
  for (std::size_t i = 2; i + 2 < sol.states.size(); i += 499) {
    const Vec3 fd = (-sol.states[i + 2].position + 8 * sol.states[i + 1].position -
                     8 * sol.states[i - 1].position + sol.states[i - 2].position) /
                    (12 * h);
    worst = std::max(worst, (fd - sol.states[i].tangent).norm());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("chord never exceeds arclength, with positive deficit for a > 0") {
  const auto& sol = profile_a1();
  for (std::size_t i = 0; i + 5 < sol.states.size(); i += 1499) {
    for (std::size_t k = 1; k <= 5; ++k) {
      const Real chord = (sol.states[i + k].position - sol.states[i].position).norm();
      const Real arc = k * sol.step;
      CHECK(chord <= arc + 1e-12);
      if (k == 5) CHECK(arc - chord > 0.0);
    }
  }
}

TEST_CASE("reflection symmetry s -> -s") {
  const auto& sol = profile_a1();
  const Mat3 m = Vec3(-1, 1, 1).asDiagonal();
  for (Real s : {0.5, 3.0, 17.0, 101.0}) {
    const auto& plus = sol.node(s);
    const auto& minus = sol.node(-s);
    CHECK((minus.position - m * plus.position).norm() < 1e-8);
    CHECK((minus.tangent + m * plus.tangent).norm() < 1e-8);
    CHECK((minus.normal - m * plus.normal).norm() < 1e-8);
    CHECK((minus.binormal - m * plus.binormal).norm() < 1e-8);
  }
}

TEST_CASE("too large a step is rejected with a diagnostic") {
  CHECK_THROWS_AS(integrate_profile(SelfSimilarParams(1.0), 100.0, 0.5),
                  std::runtime_error);
}

TEST_CASE("corner angle for a = 1 matches 2 asin(e^{-pi/2})") {
  auto data = extract_frame_limits(profile_a1());
  const Real expected = 2.0 * std::asin(std::exp(-0.5 * kPi));
  CHECK(std::abs(data.theta - expected) < 1e-3);
  CHECK(std::abs(corner_angle_residual(data, 1.0)) < 1e-3);
}

TEST_CASE("corner angle for a = 0.5 matches 2 asin(e^{-pi/8})") {
  auto sol = integrate_profile(SelfSimilarParams(0.5), 200.0);
  auto data = extract_frame_limits(sol);
  CHECK(std::abs(data.theta - 2.0 * std::asin(std::exp(-kPi / 8.0))) < 1e-3);
}

TEST_CASE("straight-line limit: a -> 0 gives theta = pi") {
  auto sol = integrate_profile(SelfSimilarParams(1e-3), 200.0);
  auto data = extract_frame_limits(sol);
  CHECK(std::abs(data.theta - kPi) < 5e-3);
}

TEST_CASE("tiny angle at a = 2 is resolved with a long span") {
  auto sol = integrate_profile(SelfSimilarParams(2.0), 450.0, 2.5e-4);
  auto data = extract_frame_limits(sol);
  CHECK(std::abs(corner_angle_residual(data, 2.0)) < 5e-4);
}

TEST_CASE("limit frame data invariants (a = 1)") {
  auto data = extract_frame_limits(profile_a1());
  CHECK(std::abs(data.a_plus.norm() - 1.0) < 1e-6);
  CHECK(std::abs(data.a_minus.norm() - 1.0) < 1e-6);
  Vec3 re_b, im_b;
  for (int c = 0; c < 3; ++c) {
    re_b[c] = data.b_plus[c].real();
    im_b[c] = data.b_plus[c].imag();
  }
  CHECK(std::abs(data.a_plus.dot(re_b)) < 1e-4);
  CHECK(std::abs(data.a_plus.dot(im_b)) < 1e-4);
  // A_- is the (x,y,z) -> (x,-y,-z) image of A_+
  const Mat3 refl = Vec3(1, -1, -1).asDiagonal();
  CHECK((data.a_minus - refl * data.a_plus).norm() < 10 * std::max(data.extraction_error, 1e-6));
}

TEST_CASE("tangent decay toward the limit has rate 1/s") {
  const auto& sol = profile_a1();
  auto data = extract_frame_limits(sol);
  std::vector<Real> log_s, log_dev;
  for (std::size_t i = 0; i < sol.states.size(); i += 37) {
    const auto& fs = sol.states[i];
    if (fs.s < 20.0) continue;
    const Real dev = (fs.tangent - data.a_plus).norm();
    if (dev < 1e-12) continue;
    log_s.push_back(std::log(fs.s));
    log_dev.push_back(std::log(dev));
  }
  auto fit = fit_line(log_s, log_dev);
  CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("snapshot_chi_a: rescaled evaluation") {
  const auto& sol = profile_a1();

  // t = 1 reproduces the profile itself
  auto at_one = snapshot_chi_a(sol, 1.0, {0.0, 1.25, -3.5});
  CHECK((at_one[0].chi - Vec3(0, 0, 2)).norm() < 1e-12);
  CHECK((at_one[1].chi - sol.at(1.25).position).norm() < 1e-12);

  // x = 0 scales the corner point by sqrt(t)
  for (Real t : {0.04, 0.25, 2.0}) {
    auto s = snapshot_chi_a(sol, t, {0.0});
    CHECK((s[0].chi - std::sqrt(t) * Vec3(0, 0, 2)).norm() < 1e-12);
  }

  // a=1, t=0.25, x=5 equals 0.5 G_1(10)
  auto s = snapshot_chi_a(sol, 0.25, {5.0});
  CHECK((s[0].chi - 0.5 * sol.node(10.0).position).norm() < 1e-6);
  CHECK((s[0].tangent - sol.node(10.0).tangent).norm() < 1e-6);

  // out-of-range refused
  CHECK_THROWS_AS(snapshot_chi_a(sol, 1e-6, {5.0}), std::out_of_range);
}
