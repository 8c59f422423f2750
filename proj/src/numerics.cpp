#include "vflab/numerics.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace vflab {

Mat3 rotation_exp(const Vec3& w) {
  const Real theta = w.norm();
  Mat3 wx;
  wx << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  if (theta < 1e-8) {
    // series: I + W + W²/2 keeps orthogonality to O(theta³)
    return Mat3::Identity() + wx + 0.5 * (wx * wx);
  }
  const Real s = std::sin(theta) / theta;
  const Real c = (1.0 - std::cos(theta)) / (theta * theta);
  return Mat3::Identity() + s * wx + c * (wx * wx);
}

void polar_orthonormalize(Mat3& r) {
  // Near-orthogonal fast path: R(I + E)^{-1/2} with E = R^T R - I expanded
  // to second order; falls back to the SVD polar factor otherwise.
  const Mat3 e = r.transpose() * r - Mat3::Identity();
  const Real defect = e.norm();
  if (defect < 1e-3 && r.determinant() > 0) {
    r = r * (Mat3::Identity() - 0.5 * e + 0.375 * e * e);
    return;
  }
  Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 q = svd.matrixU() * svd.matrixV().transpose();
  if (q.determinant() < 0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1;
    q = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  r = q;
}

Real orthonormality_defect(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).norm();
}

Mat3 procrustes_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("procrustes_rotation: mismatched point sets");
  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < a.size(); ++i) h += b[i] * a[i].transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) d(2, 2) = -1;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

RealVector cumulative_trapezoid(const RealVector& ys, Real h, int j0) {
  const int n = static_cast<int>(ys.size());
  if (j0 < 0 || j0 >= n)
    throw std::invalid_argument("cumulative_trapezoid: anchor out of range");
  RealVector out(n);
  out[j0] = 0.0;
  for (int j = j0 + 1; j < n; ++j)
    out[j] = out[j - 1] + 0.5 * h * (ys[j - 1] + ys[j]);
  for (int j = j0 - 1; j >= 0; --j)
    out[j] = out[j + 1] - 0.5 * h * (ys[j] + ys[j + 1]);
  return out;
}

namespace {

template <typename Vec, typename S>
S catmull_rom_impl(const Vec& v, Real pos) {
  const int n = static_cast<int>(v.size());
  if (n < 4) throw std::invalid_argument("catmull_rom: need at least 4 samples");
  Real clamped = std::clamp(pos, 0.0, static_cast<Real>(n - 1));
  int i = static_cast<int>(std::floor(clamped));
  i = std::clamp(i, 1, n - 3);
  const Real u = clamped - i;
  const S p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * u + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (u * u) +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (u * u * u));
}

}  // namespace

Complex catmull_rom(const ComplexVector& v, Real pos) {
  return catmull_rom_impl<ComplexVector, Complex>(v, pos);
}

Real catmull_rom(const RealVector& v, Real pos) {
  return catmull_rom_impl<RealVector, Real>(v, pos);
}

LineFit fit_line(const std::vector<Real>& xs, const std::vector<Real>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need at least two samples");
  const Real n = static_cast<Real>(xs.size());
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const Real denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  Real ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Real r = ys[i] - fit.slope * xs[i] - fit.intercept;
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

RealVector fit_least_squares(const std::vector<RealVector>& basis_columns,
                             const RealVector& rhs) {
  if (basis_columns.empty())
    throw std::invalid_argument("fit_least_squares: no basis columns");
  const Eigen::Index rows = rhs.size();
  Eigen::MatrixXd a(rows, static_cast<Eigen::Index>(basis_columns.size()));
  for (std::size_t k = 0; k < basis_columns.size(); ++k) {
    if (basis_columns[k].size() != rows)
      throw std::invalid_argument("fit_least_squares: column size mismatch");
    a.col(static_cast<Eigen::Index>(k)) = basis_columns[k];
  }
  return a.colPivHouseholderQr().solve(rhs);
}

}  // namespace vflab
