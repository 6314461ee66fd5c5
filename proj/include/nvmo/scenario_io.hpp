#pragma once

#include "nvmo/sim.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace nvmo {

namespace detail {

inline Vec3 parse_vec3(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) {
    throw ValidationError("scenario: " + what + " must be an array of three numbers");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline Pose parse_pose(const nlohmann::json& j, const std::string& what) {
  Pose g;
  if (j.contains("position")) g.pos = parse_vec3(j["position"], what + ".position");
  if (j.contains("xi_theta")) g.rot = rot_exp(parse_vec3(j["xi_theta"], what + ".xi_theta"));
  return g;
}

inline VelocityProfile parse_velocity(const nlohmann::json& j) {
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero") return VelocityProfile::zero();
  if (kind == "constant") {
    Twist t;
    if (j.contains("linear")) t.v = parse_vec3(j["linear"], "velocity.linear");
    if (j.contains("angular")) t.w = parse_vec3(j["angular"], "velocity.angular");
    return VelocityProfile::constant(t);
  }
  if (kind == "piecewise") {
    VelocityProfile prof;
    prof.kind = VelocityProfile::Kind::Piecewise;
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty()) {
      throw ValidationError("scenario: piecewise velocity needs a nonempty segments array");
    }
    for (const auto& seg : j["segments"]) {
      VelocityProfile::Segment s;
      if (seg.contains("until") && !seg["until"].is_null()) s.t_until = seg["until"].get<double>();
      if (seg.contains("linear")) s.twist.v = parse_vec3(seg["linear"], "segment.linear");
      if (seg.contains("angular")) s.twist.w = parse_vec3(seg["angular"], "segment.angular");
      prof.segments.push_back(s);
    }
    return prof;
  }
  throw ValidationError("scenario: unknown velocity kind '" + kind + "'");
}

}  // namespace detail

/// Builds a Scenario from parsed JSON. With validate = false only the
/// structure is checked, so tools that report on invalid scenarios (e.g.
/// graph diagnostics) can still load them.
inline Scenario scenario_from_json(const nlohmann::json& j, bool validate = true) {
  Scenario sc;
  if (!j.is_object() || !j.contains("cameras") || !j.contains("targets") || !j.contains("graph")) {
    throw ValidationError("scenario: top-level keys cameras, targets, and graph are required");
  }
  for (const auto& jc : j["cameras"]) {
    CameraRig rig;
    rig.pose_world = detail::parse_pose(jc, "camera");
    rig.intrinsics.focal_length = jc.value("focal_length", 0.01);
    if (!jc.contains("initial_estimate")) {
      throw ValidationError("scenario: every camera needs an initial_estimate");
    }
    sc.initial_estimates.push_back(detail::parse_pose(jc["initial_estimate"], "initial_estimate"));
    sc.cameras.push_back(std::move(rig));
  }
  for (const auto& jt : j["targets"]) {
    TargetSpec spec;
    spec.initial_pose = detail::parse_pose(jt, "target");
    if (jt.contains("feature_points")) {
      spec.model.points.clear();
      for (const auto& p : jt["feature_points"]) {
        spec.model.points.push_back(detail::parse_vec3(p, "feature point"));
      }
    } else {
      spec.model = FeatureModel::default_square();
    }
    if (jt.contains("velocity")) spec.velocity = detail::parse_velocity(jt["velocity"]);
    sc.targets.push_back(std::move(spec));
  }
  // the target's feature model is what its camera observes
  for (std::size_t i = 0; i < sc.cameras.size() && i < sc.targets.size(); ++i) {
    sc.cameras[i].model = sc.targets[i].model;
  }
  {
    const auto& jg = j["graph"];
    std::vector<Edge> edges;
    if (jg.contains("edges")) {
      for (const auto& je : jg["edges"]) {
        if (!je.is_array() || je.size() != 2) {
          throw ValidationError("scenario: graph edges must be [from, to] pairs");
        }
        edges.push_back({je[0].get<int>(), je[1].get<int>()});
      }
    }
    try {
      sc.graph = Digraph(static_cast<int>(sc.cameras.size()), std::move(edges));
    } catch (const std::invalid_argument& ex) {
      throw ValidationError(std::string("scenario: ") + ex.what());
    }
  }
  if (j.contains("gains")) {
    sc.k_e = j["gains"].value("k_e", sc.k_e);
    sc.k_s = j["gains"].value("k_s", sc.k_s);
  }
  if (j.contains("integration")) {
    sc.dt = j["integration"].value("dt", sc.dt);
    sc.horizon = j["integration"].value("horizon", sc.horizon);
  }
  if (j.contains("noise")) sc.noise_std = j["noise"].value("std", 0.0);
  if (validate) sc.validate();
  return sc;
}

inline Scenario load_scenario(const std::string& path, bool validate = true) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("scenario: JSON parse failure in '" + path + "': " + ex.what());
  }
  try {
    return scenario_from_json(j, validate);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("scenario: malformed value in '" + path + "': " + ex.what());
  }
}

}  // namespace nvmo
