#pragma once

#include "nvmo/liegroup.hpp"

#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace nvmo {

using Measurement = Eigen::VectorXd;  // stacked image points, length 2m
using ImageJacobian = Eigen::Matrix<double, Eigen::Dynamic, 6>;

struct CameraIntrinsics {
  double focal_length = 0.01;  // meters

  void validate() const {
    if (!(focal_length > 0.0)) {
      throw std::invalid_argument("CameraIntrinsics: focal length must be positive");
    }
  }
};

struct FeatureModel {
  std::vector<Vec3> points;  // object-frame feature positions

  std::size_t size() const { return points.size(); }

  /// Four coplanar corners of a 0.25 m square in the object x-y plane.
  static FeatureModel default_square() {
    return {{{0.125, 0.125, 0.0}, {-0.125, 0.125, 0.0}, {-0.125, -0.125, 0.0}, {0.125, -0.125, 0.0}}};
  }

  void validate() const {
    if (points.empty()) {
      throw std::invalid_argument("FeatureModel: no feature points");
    }
    for (std::size_t a = 0; a < points.size(); ++a) {
      for (std::size_t b = a + 1; b < points.size(); ++b) {
        if ((points[a] - points[b]).norm() < 1e-12) {
          throw std::invalid_argument("FeatureModel: coincident feature points");
        }
      }
    }
  }
};

inline constexpr double kDefaultZMin = 1e-6;       // camera-plane guard, meters
inline constexpr double kJacobianStep = 1e-6;      // finite-difference step
inline constexpr double kMaxConditionNumber = 1e8;

/// Perspective projection of all feature points under the relative pose
/// g_io: f_l = (lambda / z_l) [x_l, y_l] with p_l = g_io * p_{o,l}.
inline Measurement project(const Pose& g_io, const FeatureModel& model,
                           const CameraIntrinsics& cam, double z_min = kDefaultZMin) {
  Measurement f(2 * model.points.size());
  for (std::size_t l = 0; l < model.points.size(); ++l) {
    const Vec3 p = g_io * model.points[l];
    if (std::abs(p.z()) <= z_min) {
      std::ostringstream msg;
      msg << "project: feature at camera plane (point " << l + 1 << ", |z| = " << std::abs(p.z()) << ")";
      throw std::runtime_error(msg.str());
    }
    f(2 * l) = cam.focal_length * p.x() / p.z();
    f(2 * l + 1) = cam.focal_length * p.y() / p.z();
  }
  return f;
}

/// Image Jacobian of the measurement map with respect to error-vector
/// coordinates, by central differences: column k perturbs g_bar on the right
/// by the lifted increment (dp, rot_exp(dr)). Satisfies
/// f(g_bar g_e) - f(g_bar) = J E_R(g_e) + O(||E_R||^2).
inline ImageJacobian image_jacobian(const Pose& g_bar, const FeatureModel& model,
                                    const CameraIntrinsics& cam, double step = kJacobianStep) {
  ImageJacobian jac(2 * model.points.size(), 6);
  for (int k = 0; k < 6; ++k) {
    Vec6 d = Vec6::Zero();
    d(k) = step;
    const Pose lift_plus{rot_exp(d.tail<3>()), d.head<3>()};
    const Pose lift_minus{rot_exp(-d.tail<3>()), -d.head<3>()};
    jac.col(k) = (project(g_bar * lift_plus, model, cam) - project(g_bar * lift_minus, model, cam)) / (2.0 * step);
  }
  return jac;
}

/// Least-squares reconstruction of the estimation error vector from the
/// measurement residual: J^+(g_bar) (f - f(g_bar)). Requires at least four
/// feature points so the Jacobian has full column rank.
inline ErrorVector reconstruct_error(const Measurement& f, const Pose& g_bar,
                                     const FeatureModel& model, const CameraIntrinsics& cam) {
  if (model.points.size() < 4) {
    throw std::invalid_argument("reconstruct_error: at least four feature points required");
  }
  if (f.size() != static_cast<Eigen::Index>(2 * model.points.size())) {
    throw std::invalid_argument("reconstruct_error: measurement length does not match feature model");
  }
  const ImageJacobian jac = image_jacobian(g_bar, model, cam);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                              : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxConditionNumber)) {
    std::ostringstream msg;
    msg << "reconstruct_error: degenerate feature configuration (condition number " << cond << ")";
    throw std::runtime_error(msg.str());
  }
  const Vec6 e = svd.solve(f - project(g_bar, model, cam));
  return ErrorVector::from_vector(e);
}

/// A camera as placed in a scenario: world pose, optics, and the feature
/// model of the target it observes.
struct CameraRig {
  Pose pose_world;
  CameraIntrinsics intrinsics;
  FeatureModel model;
};

}  // namespace nvmo
