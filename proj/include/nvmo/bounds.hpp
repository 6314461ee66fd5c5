#pragma once

#include "nvmo/liegroup.hpp"

#include <utility>

namespace nvmo {

/// U_p = 1/2 sum_i ||p* - p_bar_i||^2.
inline double energy_Up(std::span<const Vec3> p_bars, const Vec3& p_star) {
  double u = 0.0;
  for (const Vec3& p : p_bars) u += (p_star - p).squaredNorm();
  return 0.5 * u;
}

/// U_R = sum_i phi(E*^T R_bar_i).
inline double energy_UR(std::span<const Rotation> r_bars, const Rotation& r_star) {
  double u = 0.0;
  for (const Rotation& r : r_bars) u += phi(r_star.transpose() * r);
  return u;
}

/// Baseline distances from the true target poses to their average:
/// rho_p = 1/2 sum ||p_i - p*||^2, rho_R = sum phi(E*^T R_i). All poses must
/// share one frame; the values are invariant under a change of that frame.
inline std::pair<double, double> rho_values(std::span<const Pose> targets, const Pose& g_star) {
  double rho_p = 0.0, rho_R = 0.0;
  for (const Pose& g : targets) {
    rho_p += 0.5 * (g.pos - g_star.pos).squaredNorm();
    rho_R += phi(g_star.rot.transpose() * g.rot);
  }
  return {rho_p, rho_R};
}

/// phi_m = max over pairs of phi(R_i^T R_j).
inline double phi_max(std::span<const Rotation> rs) {
  if (rs.empty()) throw std::invalid_argument("phi_max: empty rotation list");
  double m = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      m = std::max(m, phi(rs[i].transpose() * rs[j]));
    }
  }
  return m;
}

/// beta = 1 - sqrt(2 (phi(E*^T R_h) + c)) with h the target orientation
/// farthest from the average. May be <= 0, in which case the orientation
/// averaging bound degenerates to 1.
inline double beta_value(std::span<const Rotation> r_targets, const Rotation& r_star, double c) {
  if (r_targets.empty()) throw std::invalid_argument("beta_value: empty rotation list");
  if (c < 0.0) throw std::invalid_argument("beta_value: c must be nonnegative");
  double phi_h = 0.0;
  for (const Rotation& r : r_targets) {
    phi_h = std::max(phi_h, phi(r_star.transpose() * r));
  }
  return 1.0 - std::sqrt(2.0 * (phi_h + c));
}

/// Averaging performance levels:
///   eps_p = 1 - (1-eps)(1 - sqrt(kW))^2          if k <= 1/W, else 1
///   eps_R = 1 - (1-eps)(sqrt(beta) - sqrt(kW))^2 if k <= beta/W and beta > 0, else 1
/// with k = k_e / k_s.
inline std::pair<double, double> theorem1_bounds(double k_e, double k_s, int w_const,
                                                 double beta, double epsilon) {
  if (!(k_e > 0.0) || !(k_s > 0.0)) throw std::invalid_argument("theorem1_bounds: gains must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("theorem1_bounds: epsilon must lie in (0, 1)");
  if (w_const < 0) throw std::invalid_argument("theorem1_bounds: W must be nonnegative");
  const double k = k_e / k_s;
  const double kw = k * static_cast<double>(w_const);
  double eps_p = 1.0, eps_R = 1.0;
  if (kw <= 1.0) {
    const double d = 1.0 - std::sqrt(kw);
    eps_p = 1.0 - (1.0 - epsilon) * d * d;
  }
  if (beta > 0.0 && kw <= beta) {
    const double d = std::sqrt(beta) - std::sqrt(kw);
    eps_R = 1.0 - (1.0 - epsilon) * d * d;
  }
  return {eps_p, eps_R};
}

/// mu(gamma) = sqrt(2) / (sqrt(2) - gamma), defined for 0 <= gamma < sqrt(2).
inline double mu_value(double gamma) {
  const double root2 = std::sqrt(2.0);
  if (!(gamma >= 0.0) || !(gamma < root2)) {
    throw std::domain_error("mu_value: gamma must lie in [0, sqrt(2))");
  }
  return root2 / (root2 - gamma);
}

/// Tracking performance levels:
///   eps_p'  = 1 + 1/(k_e - 1) + w_p^2 / (rho_p' (k_e - 1))
///   eps_R'  = 1 + mu^2/(k_e - mu^2) + w_R^2 / (rho_R' (k_e - mu^2))
/// Requires k_e > max(1, mu^2).
inline std::pair<double, double> theorem2_bounds(double k_e, double mu, double w_bar_p,
                                                 double w_bar_R, double rho_p_sup, double rho_R_sup) {
  if (!(mu >= 1.0)) throw std::invalid_argument("theorem2_bounds: mu must be at least 1");
  if (!(rho_p_sup > 0.0) || !(rho_R_sup > 0.0)) {
    throw std::invalid_argument("theorem2_bounds: rho suprema must be positive");
  }
  if (w_bar_p < 0.0 || w_bar_R < 0.0) throw std::invalid_argument("theorem2_bounds: velocity bounds must be nonnegative");
  if (!(k_e > std::max(1.0, mu * mu))) {
    throw std::domain_error("theorem2_bounds: gain below tracking threshold (k_e must exceed max(1, mu^2))");
  }
  const double eps_p = 1.0 + 1.0 / (k_e - 1.0) + (w_bar_p * w_bar_p) / (rho_p_sup * (k_e - 1.0));
  const double mu2 = mu * mu;
  const double eps_R = 1.0 + mu2 / (k_e - mu2) + (w_bar_R * w_bar_R) / (rho_R_sup * (k_e - mu2));
  return {eps_p, eps_R};
}

/// Closed-form performance quantities of the averaging analysis for one
/// target configuration and gain pair.
struct AveragingReport {
  double rho_p = 0.0;
  double rho_R = 0.0;
  double beta = 0.0;
  double phi_m = 0.0;
  double k = 0.0;  // k_e / k_s
  int w_const = 0;
  double eps_p = 1.0;
  double eps_R = 1.0;
};

inline AveragingReport make_averaging_report(std::span<const Pose> targets, double k_e, double k_s,
                                             int w_const, double c, double epsilon) {
  if (targets.empty()) throw std::invalid_argument("make_averaging_report: no targets");
  const Pose g_star = pose_average(targets);
  std::vector<Rotation> rots;
  rots.reserve(targets.size());
  for (const Pose& g : targets) rots.push_back(g.rot);
  AveragingReport rep;
  std::tie(rep.rho_p, rep.rho_R) = rho_values(targets, g_star);
  rep.phi_m = phi_max(rots);
  rep.beta = beta_value(rots, g_star.rot, c);
  rep.k = k_e / k_s;
  rep.w_const = w_const;
  std::tie(rep.eps_p, rep.eps_R) = theorem1_bounds(k_e, k_s, w_const, rep.beta, epsilon);
  return rep;
}

struct TrackingReport {
  double rho_p_sup = 0.0;
  double rho_R_sup = 0.0;
  double w_bar_p = 0.0;
  double w_bar_R = 0.0;
  double gamma = 0.0;
  double mu = 1.0;
  double eps_p_track = 0.0;
  double eps_R_track = 0.0;
};

/// One evaluation of the average motion: body velocity of the position
/// average, the next orientation average, the average body angular velocity
/// estimated by finite differencing, and the instantaneous projection gap
/// gamma = ||E* - S||_F.
struct AverageMotionStep {
  Vec3 p_star_dot = Vec3::Zero();
  Rotation e_star_next = Mat3::Identity();
  Vec3 omega_star = Vec3::Zero();
  double gamma_now = 0.0;
};

inline AverageMotionStep average_motion_step(std::span<const Pose> targets,
                                             std::span<const Twist> twists, double dt) {
  if (targets.empty() || targets.size() != twists.size()) {
    throw std::invalid_argument("average_motion_step: targets and twists must match and be nonempty");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("average_motion_step: dt must be positive");
  const double n = static_cast<double>(targets.size());
  Mat3 s = Mat3::Zero(), s_next = Mat3::Zero();
  Vec3 mean_v = Vec3::Zero();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    s += targets[i].rot;
    s_next += targets[i].rot * rot_exp(twists[i].w * dt);
    mean_v += targets[i].rot * twists[i].v;
  }
  s /= n;
  s_next /= n;
  mean_v /= n;
  AverageMotionStep out;
  const Rotation e_star = proj_so3(s);
  out.e_star_next = proj_so3(s_next);
  out.p_star_dot = mean_v;  // = E* v^{b,*} with v^{b,*} = E*^T mean_v
  const Mat3 m = e_star.transpose() * (out.e_star_next - e_star) / dt;
  out.omega_star = vee(0.5 * (m - m.transpose()));
  out.gamma_now = (e_star - s).norm();
  return out;
}

}  // namespace nvmo
