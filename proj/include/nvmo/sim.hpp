#pragma once

#include "nvmo/bounds.hpp"
#include "nvmo/camera.hpp"
#include "nvmo/graph.hpp"
#include "nvmo/liegroup.hpp"
#include "nvmo/observer.hpp"

#include <limits>
#include <random>
#include <string>

namespace nvmo {

/// Raised when a scenario is structurally invalid (as opposed to failing
/// while running).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct VelocityProfile {
  enum class Kind { Zero, Constant, Piecewise };

  struct Segment {
    double t_until = std::numeric_limits<double>::infinity();
    Twist twist;
  };

  Kind kind = Kind::Zero;
  std::vector<Segment> segments;  // ascending t_until; last one holds to the horizon

  static VelocityProfile zero() { return {}; }

  static VelocityProfile constant(const Twist& t) {
    return {Kind::Constant, {{std::numeric_limits<double>::infinity(), t}}};
  }

  Twist at(double t) const {
    if (kind == Kind::Zero || segments.empty()) return Twist::Zero();
    for (const Segment& s : segments) {
      if (t < s.t_until) return s.twist;
    }
    return segments.back().twist;
  }

  double sup_linear() const {
    double m = 0.0;
    for (const Segment& s : segments) m = std::max(m, s.twist.v.norm());
    return m;
  }

  double sup_angular() const {
    double m = 0.0;
    for (const Segment& s : segments) m = std::max(m, s.twist.w.norm());
    return m;
  }

  bool is_zero() const { return sup_linear() == 0.0 && sup_angular() == 0.0; }

  void validate() const {
    double prev = -std::numeric_limits<double>::infinity();
    for (const Segment& s : segments) {
      if (!s.twist.v.allFinite() || !s.twist.w.allFinite()) {
        throw ValidationError("VelocityProfile: twist entries must be finite");
      }
      if (!(s.t_until > prev)) throw ValidationError("VelocityProfile: breakpoints must be increasing");
      prev = s.t_until;
    }
  }
};

struct TargetSpec {
  Pose initial_pose;   // world frame
  FeatureModel model;
  VelocityProfile velocity;
};

struct Scenario {
  std::vector<CameraRig> cameras;       // static world poses
  std::vector<TargetSpec> targets;
  Digraph graph;
  double k_e = 1.0;
  double k_s = 1.0;
  double dt = 1e-3;
  double horizon = 50.0;
  std::vector<Pose> initial_estimates;  // camera frames
  double noise_std = 0.0;               // image-plane units

  std::size_t size() const { return cameras.size(); }

  bool any_moving() const {
    for (const TargetSpec& t : targets) {
      if (!t.velocity.is_zero()) return true;
    }
    return false;
  }

  void validate() const {
    const std::size_t n = cameras.size();
    if (n == 0) throw ValidationError("Scenario: at least one camera required");
    if (targets.size() != n || initial_estimates.size() != n || static_cast<std::size_t>(graph.n) != n) {
      throw ValidationError("Scenario: camera, target, estimate, and graph node counts must agree");
    }
    if (!(dt > 0.0)) throw ValidationError("Scenario: dt must be positive");
    if (!(horizon > 0.0)) throw ValidationError("Scenario: horizon must be positive");
    if (!(k_e > 0.0) || !(k_s > 0.0)) throw ValidationError("Scenario: gains must be positive");
    if (noise_std < 0.0) throw ValidationError("Scenario: noise std must be nonnegative");
    graph.validate();
    for (const CameraRig& c : cameras) c.intrinsics.validate();
    for (const TargetSpec& t : targets) {
      t.model.validate();
      if (t.model.size() < 4) {
        throw ValidationError("Scenario: targets need at least four feature points for reconstruction");
      }
      t.velocity.validate();
    }
    const Assumption1Flags flags = validate_assumption1(graph);
    if (!flags.ok()) {
      throw ValidationError("Scenario: communication graph must be balanced and strongly connected");
    }
  }
};

/// Relative rigid body motion of a target with a static observer frame:
/// g <- g * se3_exp(vel, dt).
inline Pose world_step(const Pose& g, const Twist& vel, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("world_step: dt must be positive");
  return g * se3_exp(vel, dt);
}

struct AssumptionFlags {
  double min_pairwise_eig = 0.0;   // min over i,j of lambda_min(sym(R_woj^T R_woi))
  double min_estimate_eig = 0.0;   // min over i of lambda_min(sym(E*^T R_bar_woi))
  bool pairwise_orientations_pd = false;
  bool estimates_aligned_pd = false;  // membership in the invariant set S
  bool distinct_pair = false;         // some pair differs in both position and orientation
};

inline double min_sym_eig(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

inline AssumptionFlags check_assumptions(std::span<const Pose> targets_world,
                                         std::span<const Rotation> estimate_rots_world,
                                         const Rotation& e_star) {
  AssumptionFlags flags;
  flags.min_pairwise_eig = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < targets_world.size(); ++i) {
    for (std::size_t j = 0; j < targets_world.size(); ++j) {
      if (i == j) continue;
      flags.min_pairwise_eig = std::min(
          flags.min_pairwise_eig, min_sym_eig(targets_world[j].rot.transpose() * targets_world[i].rot));
    }
  }
  if (targets_world.size() < 2) flags.min_pairwise_eig = 1.0;
  flags.min_estimate_eig = std::numeric_limits<double>::infinity();
  for (const Rotation& r : estimate_rots_world) {
    flags.min_estimate_eig = std::min(flags.min_estimate_eig, min_sym_eig(e_star.transpose() * r));
  }
  if (estimate_rots_world.empty()) flags.min_estimate_eig = 1.0;
  flags.pairwise_orientations_pd = flags.min_pairwise_eig > 0.0;
  flags.estimates_aligned_pd = flags.min_estimate_eig > 0.0;
  for (std::size_t i = 0; i < targets_world.size() && !flags.distinct_pair; ++i) {
    for (std::size_t j = i + 1; j < targets_world.size(); ++j) {
      const bool pos_differ = (targets_world[i].pos - targets_world[j].pos).norm() > 1e-12;
      const bool rot_differ = (targets_world[i].rot - targets_world[j].rot).cwiseAbs().maxCoeff() > 1e-12;
      if (pos_differ && rot_differ) {
        flags.distinct_pair = true;
        break;
      }
    }
  }
  return flags;
}

struct MetricsRecord {
  double t = 0.0;
  double U_p = 0.0;
  double U_R = 0.0;
  double rho_p = 0.0;
  double rho_R = 0.0;
  double eps_bound_p = 0.0;     // eps_p * rho_p(t), averaging bound line
  double eps_bound_R = 0.0;     // eps_R * rho_R(t)
  double min_eig_S = 0.0;
  std::vector<double> err_cam;  // per-camera ||E_R(g_ei)|| against the true pose
  double gamma = 0.0;           // ||E* - S||_F
  double min_eig_pairwise = 0.0;
  bool assumptions_ok = false;
};

struct SimResult {
  std::vector<MetricsRecord> records;
  std::vector<ObserverState> final_states;
  double eps_p = 1.0;  // Theorem-1 levels used for the bound columns
  double eps_R = 1.0;
  int w_const = 0;
};

/// Report defaults for the slack parameters; both only enter the bound
/// overlay columns, never the dynamics.
inline constexpr double kDefaultLemmaSlackC = 0.01;
inline constexpr double kDefaultTheorem1Epsilon = 1e-3;

/// Full simulation loop: propagate targets, synthesize measurements,
/// advance all observers one synchronous round, and record metrics each
/// step. Deterministic for a fixed scenario and seed.
inline SimResult run(const Scenario& sc, std::uint64_t seed = 0) {
  sc.validate();
  const std::size_t n = sc.size();

  SimResult result;
  result.w_const = compute_W(sc.graph).w;
  {
    std::vector<Pose> init_targets;
    init_targets.reserve(n);
    for (const TargetSpec& t : sc.targets) init_targets.push_back(t.initial_pose);
    const AveragingReport rep = make_averaging_report(init_targets, sc.k_e, sc.k_s, result.w_const,
                                                      kDefaultLemmaSlackC, kDefaultTheorem1Epsilon);
    result.eps_p = rep.eps_p;
    result.eps_R = rep.eps_R;
  }

  std::vector<Pose> targets;
  targets.reserve(n);
  for (const TargetSpec& t : sc.targets) targets.push_back(t.initial_pose);

  std::vector<ObserverState> states;
  states.reserve(n);
  for (const Pose& g0 : sc.initial_estimates) states.push_back({g0, sc.k_e, sc.k_s});

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto steps = static_cast<std::size_t>(std::llround(sc.horizon / sc.dt));
  result.records.reserve(steps + 1);

  // feature depths of the previous step, for detecting camera-plane
  // crossings that hop over the z_min guard between samples
  std::vector<std::vector<double>> prev_z(n);

  for (std::size_t step = 0; step <= steps; ++step) {
    const double t = static_cast<double>(step) * sc.dt;
    try {
      std::vector<Measurement> meas(n);
      std::vector<Pose> rel_targets(n);
      for (std::size_t i = 0; i < n; ++i) {
        rel_targets[i] = sc.cameras[i].pose_world.inverse() * targets[i];
        const std::size_t m = sc.cameras[i].model.size();
        std::vector<double> z(m);
        for (std::size_t l = 0; l < m; ++l) {
          z[l] = (rel_targets[i] * sc.cameras[i].model.points[l]).z();
          if (step > 0 && z[l] * prev_z[i][l] < 0.0) {
            throw std::runtime_error("feature crossed the camera plane (camera " +
                                     std::to_string(i + 1) + ", point " + std::to_string(l + 1) + ")");
          }
        }
        prev_z[i] = std::move(z);
        meas[i] = project(rel_targets[i], sc.cameras[i].model, sc.cameras[i].intrinsics);
        if (sc.noise_std > 0.0) {
          for (Eigen::Index r = 0; r < meas[i].size(); ++r) meas[i](r) += sc.noise_std * gauss(rng);
        }
      }

      const Pose g_star = pose_average(targets);
      Mat3 s = Mat3::Zero();
      std::vector<Vec3> est_pos(n);
      std::vector<Rotation> est_rot(n), target_rots(n);
      for (std::size_t i = 0; i < n; ++i) {
        const Pose est_world = sc.cameras[i].pose_world * states[i].g_bar;
        est_pos[i] = est_world.pos;
        est_rot[i] = est_world.rot;
        target_rots[i] = targets[i].rot;
        s += targets[i].rot;
      }
      s /= static_cast<double>(n);

      MetricsRecord rec;
      rec.t = t;
      rec.U_p = energy_Up(est_pos, g_star.pos);
      rec.U_R = energy_UR(est_rot, g_star.rot);
      std::tie(rec.rho_p, rec.rho_R) = rho_values(targets, g_star);
      rec.eps_bound_p = result.eps_p * rec.rho_p;
      rec.eps_bound_R = result.eps_R * rec.rho_R;
      rec.gamma = (g_star.rot - s).norm();
      const AssumptionFlags flags = check_assumptions(targets, est_rot, g_star.rot);
      rec.min_eig_S = flags.min_estimate_eig;
      rec.min_eig_pairwise = flags.min_pairwise_eig;
      rec.assumptions_ok = flags.pairwise_orientations_pd && flags.distinct_pair;
      rec.err_cam.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        rec.err_cam[i] = big_E_R(states[i].g_bar.inverse() * rel_targets[i]).norm();
      }
      result.records.push_back(std::move(rec));

      if (step == steps) break;
      states = network_round(states, sc.cameras, meas, sc.graph, sc.dt);
      for (std::size_t i = 0; i < n; ++i) {
        targets[i] = world_step(targets[i], sc.targets[i].velocity.at(t), sc.dt);
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& ex) {
      throw std::runtime_error("simulation aborted at step " + std::to_string(step) + " (t = " +
                               std::to_string(t) + "): " + ex.what());
    }
  }
  result.final_states = states;
  return result;
}

/// Tracking-analysis inputs measured over the horizon. Only the target
/// trajectories matter here, so the observers are not simulated.
inline TrackingReport tracking_report(const Scenario& sc) {
  sc.validate();
  const std::size_t n = sc.size();
  TrackingReport rep;
  for (const TargetSpec& t : sc.targets) {
    rep.w_bar_p = std::max(rep.w_bar_p, t.velocity.sup_linear());
    rep.w_bar_R = std::max(rep.w_bar_R, t.velocity.sup_angular());
  }
  std::vector<Pose> targets;
  targets.reserve(n);
  for (const TargetSpec& t : sc.targets) targets.push_back(t.initial_pose);
  const auto steps = static_cast<std::size_t>(std::llround(sc.horizon / sc.dt));
  for (std::size_t step = 0; step <= steps; ++step) {
    const Pose g_star = pose_average(targets);
    const auto [rho_p, rho_R] = rho_values(targets, g_star);
    Mat3 s = Mat3::Zero();
    for (const Pose& g : targets) s += g.rot;
    s /= static_cast<double>(n);
    rep.rho_p_sup = std::max(rep.rho_p_sup, rho_p);
    rep.rho_R_sup = std::max(rep.rho_R_sup, rho_R);
    rep.gamma = std::max(rep.gamma, (g_star.rot - s).norm());
    if (step == steps) break;
    const double t = static_cast<double>(step) * sc.dt;
    for (std::size_t i = 0; i < n; ++i) {
      targets[i] = world_step(targets[i], sc.targets[i].velocity.at(t), sc.dt);
    }
  }
  rep.mu = mu_value(rep.gamma);
  std::tie(rep.eps_p_track, rep.eps_R_track) =
      theorem2_bounds(sc.k_e, rep.mu, rep.w_bar_p, rep.w_bar_R, rep.rho_p_sup, rep.rho_R_sup);
  return rep;
}

}  // namespace nvmo
