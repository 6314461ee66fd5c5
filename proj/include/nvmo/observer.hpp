#pragma once

#include "nvmo/camera.hpp"
#include "nvmo/graph.hpp"
#include "nvmo/liegroup.hpp"

#include <vector>

namespace nvmo {

inline constexpr double kReorthonormalizeTol = 1e-9;

struct ObserverState {
  Pose g_bar;            // current estimate of the camera-to-target pose
  double gain_e = 1.0;   // visual feedback gain k_e > 0
  double gain_s = 0.0;   // mutual feedback gain k_s >= 0

  void validate() const {
    if (!(gain_e > 0.0)) throw std::invalid_argument("ObserverState: k_e must be positive");
    if (gain_s < 0.0) throw std::invalid_argument("ObserverState: k_s must be nonnegative");
  }
};

/// A neighbor's estimate re-expressed in the receiving camera's frame:
/// g_ioj = g_ij * g_bar_joj.
struct NeighborEstimate {
  int j = 0;
  Pose g_ioj;
};

inline Twist vmo_input(const ErrorVector& e, double k_e) {
  if (!(k_e > 0.0)) throw std::invalid_argument("vmo_input: k_e must be positive");
  return {k_e * e.ep, k_e * e.er};
}

/// u = k_e e + k_s sum_j E_R(g_bar^-1 g_ioj). With no neighbors (or k_s = 0)
/// this reduces exactly to the single-camera input.
inline Twist networked_input(const ErrorVector& e, const Pose& g_bar,
                             std::span<const NeighborEstimate> nbrs, double k_e, double k_s) {
  if (!(k_e > 0.0)) throw std::invalid_argument("networked_input: k_e must be positive");
  if (k_s < 0.0) throw std::invalid_argument("networked_input: k_s must be nonnegative");
  Twist u{k_e * e.ep, k_e * e.er};
  const Pose inv = g_bar.inverse();
  for (const NeighborEstimate& nb : nbrs) {
    const ErrorVector rel = big_E_R(inv * nb.g_ioj);
    u.v += k_s * rel.ep;
    u.w += k_s * rel.er;
  }
  return u;
}

inline Twist networked_input(const ErrorVector& e, const Pose& g_bar,
                             const std::vector<NeighborEstimate>& nbrs, double k_e, double k_s) {
  return networked_input(e, g_bar, std::span<const NeighborEstimate>(nbrs), k_e, k_s);
}

/// One geometric integration step of the observer model
/// gdot = -hat(V_cam) g + g hat(u):
///   g <- se3_exp(-v_cam, dt) * g * se3_exp(u, dt),
/// exact for inputs held constant over the step. The rotation is projected
/// back onto SO(3) whenever accumulated drift exceeds 1e-9.
inline ObserverState observer_step(const ObserverState& st, const Twist& u, const Twist& v_cam, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("observer_step: dt must be positive");
  ObserverState out = st;
  out.g_bar = se3_exp(-v_cam, dt) * st.g_bar * se3_exp(u, dt);
  if (orthonormality_drift(out.g_bar.rot) > kReorthonormalizeTol) {
    out.g_bar.rot = proj_so3(out.g_bar.rot);
  }
  return out;
}

/// Synchronous network update: every camera reconstructs its own error from
/// its measurement, reads neighbor estimates from the previous step, and all
/// states advance together. Cameras are static here, so relative poses g_ij
/// come from the fixed rig placement. The result does not depend on the
/// iteration order over cameras.
inline std::vector<ObserverState> network_round(const std::vector<ObserverState>& states,
                                                const std::vector<CameraRig>& rigs,
                                                const std::vector<Measurement>& measurements,
                                                const Digraph& graph, double dt) {
  const std::size_t n = states.size();
  if (rigs.size() != n || measurements.size() != n || static_cast<std::size_t>(graph.n) != n) {
    throw std::invalid_argument("network_round: camera, measurement, and graph sizes disagree");
  }
  const Assumption1Flags flags = validate_assumption1(graph);
  if (!flags.ok()) {
    throw std::runtime_error("network_round: communication graph must be balanced and strongly connected");
  }
  std::vector<Twist> inputs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ErrorVector e = reconstruct_error(measurements[i], states[i].g_bar, rigs[i].model, rigs[i].intrinsics);
    std::vector<NeighborEstimate> nbrs;
    for (int j : neighbors(graph, static_cast<int>(i) + 1)) {
      const Pose g_ij = rigs[i].pose_world.inverse() * rigs[j - 1].pose_world;
      nbrs.push_back({j, g_ij * states[j - 1].g_bar});
    }
    inputs[i] = networked_input(e, states[i].g_bar, nbrs, states[i].gain_e, states[i].gain_s);
  }
  std::vector<ObserverState> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(observer_step(states[i], inputs[i], Twist::Zero(), dt));
  }
  return out;
}

}  // namespace nvmo
