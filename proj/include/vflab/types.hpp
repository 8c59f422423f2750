#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <complex>
#include <numbers>

namespace vflab {

using Real = double;
using Complex = std::complex<Real>;

/// Dense column vector of a given scalar.
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealVector = VectorX<Real>;
using ComplexVector = VectorX<Complex>;

using Vec3 = Eigen::Matrix<Real, 3, 1>;
using Mat3 = Eigen::Matrix<Real, 3, 3>;
using CVec3 = Eigen::Matrix<Complex, 3, 1>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Complex kI{0.0, 1.0};

}  // namespace vflab
