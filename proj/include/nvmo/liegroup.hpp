#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace nvmo {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Rotation matrices are stored as plain 3x3 matrices; functions producing
/// them guarantee orthonormality and unit determinant to 1e-9 per entry.
using Rotation = Mat3;

inline Mat3 hat(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
      -w.y(), w.x(), 0.0;
  return m;
}

inline Vec3 vee(const Mat3& m) {
  return Vec3(m(2, 1), m(0, 2), m(1, 0));
}

/// Rodrigues formula; series expansion of the sinc-like coefficients below
/// 1e-6 rad to avoid 0/0.
inline Rotation rot_exp(const Vec3& xi_theta) {
  const double theta = xi_theta.norm();
  const Mat3 k = hat(xi_theta);
  double a, b;  // sin(t)/t, (1-cos(t))/t^2
  if (theta < 1e-6) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0;
    b = 0.5 - t2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * k + b * (k * k);
}

/// Inverse of rot_exp. The returned vector has norm < pi. Rotations within
/// 1e-6 rad of the cut locus (angle pi) are refused because the axis is not
/// recoverable there.
inline Vec3 rot_log(const Rotation& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  if (M_PI - theta < 1e-6) {
    throw std::domain_error("rot_log: log undefined at cut locus (angle within 1e-6 of pi)");
  }
  const Vec3 w = vee(0.5 * (r - r.transpose()));  // = xi sin(theta)
  if (theta < 1e-6) {
    return w * (1.0 + theta * theta / 6.0);
  }
  return w * (theta / std::sin(theta));
}

struct Twist {
  Vec3 v = Vec3::Zero();
  Vec3 w = Vec3::Zero();

  static Twist Zero() { return {}; }
  Vec6 vector() const {
    Vec6 u;
    u << v, w;
    return u;
  }
  static Twist from_vector(const Vec6& u) { return {u.head<3>(), u.tail<3>()}; }
  Twist operator-() const { return {-v, -w}; }
};

inline Mat4 twist_hat(const Twist& t) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = hat(t.w);
  m.topRightCorner<3, 1>() = t.v;
  return m;
}

inline Twist twist_vee(const Mat4& m) {
  return {m.topRightCorner<3, 1>(), vee(m.topLeftCorner<3, 3>())};
}

struct Pose {
  Rotation rot = Mat3::Identity();
  Vec3 pos = Vec3::Zero();

  static Pose Identity() { return {}; }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rot;
    m.topRightCorner<3, 1>() = pos;
    return m;
  }

  Pose inverse() const { return {rot.transpose(), -(rot.transpose() * pos)}; }

  Pose operator*(const Pose& o) const { return {rot * o.rot, pos + rot * o.pos}; }

  Vec3 operator*(const Vec3& p) const { return rot * p + pos; }
};

/// Closed-form exponential of dt * hat(t): the rotation advances by
/// rot_exp(w dt) and the translation through the SO(3) left Jacobian.
inline Pose se3_exp(const Twist& t, double dt) {
  const Vec3 wv = t.w * dt;
  const double theta = wv.norm();
  const Mat3 k = hat(wv);
  double b, c;  // (1-cos)/t^2, (t-sin)/t^3
  if (theta < 1e-6) {
    const double t2 = theta * theta;
    b = 0.5 - t2 / 24.0;
    c = 1.0 / 6.0 - t2 / 120.0;
  } else {
    b = (1.0 - std::cos(theta)) / (theta * theta);
    c = (theta - std::sin(theta)) / (theta * theta * theta);
  }
  const Mat3 jac = Mat3::Identity() + b * k + c * (k * k);
  return {rot_exp(wv), jac * (t.v * dt)};
}

/// Vector of the antisymmetric part: e_R(R) = sk(R)^vee with
/// sk(R) = (R - R^T)/2; equals xi sin(theta) for the rotation (xi, theta).
inline Vec3 e_R(const Rotation& r) {
  return vee(0.5 * (r - r.transpose()));
}

struct ErrorVector {
  Vec3 ep = Vec3::Zero();
  Vec3 er = Vec3::Zero();

  Vec6 vector() const {
    Vec6 u;
    u << ep, er;
    return u;
  }
  static ErrorVector from_vector(const Vec6& u) { return {u.head<3>(), u.tail<3>()}; }
  double norm() const { return vector().norm(); }
};

inline ErrorVector big_E_R(const Pose& g) {
  return {g.pos, e_R(g.rot)};
}

/// phi(R) = 1/2 ||I - R||_F^2 = tr(I - R); equals 2(1 - cos(theta)), range [0, 4].
inline double phi(const Rotation& r) {
  return 3.0 - r.trace();
}

/// psi(g) = 1/2 ||p||^2 + phi(R); zero iff g is the identity.
inline double psi(const Pose& g) {
  return 0.5 * g.pos.squaredNorm() + phi(g.rot);
}

/// Orthogonal projection onto SO(3): U V^T from the SVD of m. Inputs whose
/// projection would need a reflection fix (det(UV^T) = -1) or that are rank
/// deficient are refused instead of silently repaired, since they signal a
/// violated problem assumption.
inline Rotation proj_so3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (!(sv(2) > 1e-9 * sv(0)) || !(sv(0) > 0.0)) {
    throw std::domain_error("proj_so3: projection outside assumption envelope (rank-deficient input)");
  }
  const Rotation r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    throw std::domain_error("proj_so3: projection outside assumption envelope (det(UV^T) = -1)");
  }
  return r;
}

/// Euclidean mean: the rotation minimizing sum_j phi(R^T R_j), computed as
/// the SO(3) projection of the arithmetic matrix mean.
inline Rotation euclidean_mean(std::span<const Rotation> rs) {
  if (rs.empty()) {
    throw std::invalid_argument("euclidean_mean: empty rotation list");
  }
  Mat3 s = Mat3::Zero();
  for (const Rotation& r : rs) s += r;
  s /= static_cast<double>(rs.size());
  return proj_so3(s);
}

inline Rotation euclidean_mean(const std::vector<Rotation>& rs) {
  return euclidean_mean(std::span<const Rotation>(rs));
}

/// Pose average: arithmetic mean of positions, Euclidean mean of rotations.
inline Pose pose_average(std::span<const Pose> gs) {
  if (gs.empty()) {
    throw std::invalid_argument("pose_average: empty pose list");
  }
  Vec3 p = Vec3::Zero();
  std::vector<Rotation> rs;
  rs.reserve(gs.size());
  for (const Pose& g : gs) {
    p += g.pos;
    rs.push_back(g.rot);
  }
  p /= static_cast<double>(gs.size());
  return {euclidean_mean(rs), p};
}

inline Pose pose_average(const std::vector<Pose>& gs) {
  return pose_average(std::span<const Pose>(gs));
}

/// Max per-entry deviation of r^T r from the identity.
inline double orthonormality_drift(const Mat3& r) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
}

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  return orthonormality_drift(r) <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace nvmo
