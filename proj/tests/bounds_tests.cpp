#include "nvmo/bounds.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace nvmo;
using nvmo_test::random_rotation;

namespace {

std::vector<Pose> reference_targets() {
  std::vector<Pose> t;
  for (const TargetSpec& spec : nvmo_test::reference_scenario().targets) t.push_back(spec.initial_pose);
  return t;
}

}  // namespace

TEST_CASE("energy functions vanish exactly at the average", "[bounds]") {
  const Vec3 p_star(1, 2, 3);
  REQUIRE(energy_Up(std::vector<Vec3>{p_star, p_star}, p_star) == 0.0);
  REQUIRE(energy_Up(std::vector<Vec3>{p_star + Vec3(1, 0, 0), p_star - Vec3(1, 0, 0)}, p_star) ==
          Catch::Approx(1.0).margin(1e-15));

  const Rotation r_star = rot_exp(Vec3(0.2, -0.1, 0.3));
  REQUIRE(energy_UR(std::vector<Rotation>{r_star, r_star}, r_star) < 1e-14);
  const Rotation quarter = r_star * rot_exp(Vec3(M_PI / 2, 0, 0));
  REQUIRE(energy_UR(std::vector<Rotation>{quarter}, r_star) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("energies of the reference initial state", "[bounds]") {
  const Scenario sc = nvmo_test::reference_scenario();
  const Pose g_star = pose_average(reference_targets());
  std::vector<Vec3> est_pos;
  std::vector<Rotation> est_rot;
  double expected_Up = 0.0;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    const Pose w = sc.cameras[i].pose_world * sc.initial_estimates[i];
    est_pos.push_back(w.pos);
    est_rot.push_back(w.rot);
    expected_Up += 0.5 * (w.pos - g_star.pos).squaredNorm();
  }
  REQUIRE(energy_Up(est_pos, g_star.pos) == Catch::Approx(expected_Up).margin(1e-12));
  double expected_UR = 0.0;
  for (const Rotation& r : est_rot) expected_UR += 3.0 - (g_star.rot.transpose() * r).trace();
  REQUIRE(energy_UR(est_rot, g_star.rot) == Catch::Approx(expected_UR).margin(1e-12));
}

TEST_CASE("rho values are frame invariant", "[bounds]") {
  const std::vector<Pose> targets = reference_targets();
  const Pose g_star = pose_average(targets);

  SECTION("degenerate cases") {
    const auto [zero_p, zero_R] = rho_values(std::vector<Pose>{g_star, g_star}, g_star);
    REQUIRE(zero_p == 0.0);
    REQUIRE(zero_R < 1e-14);
    const Vec3 d(0.3, -0.2, 0.5);
    const std::vector<Pose> pair{{g_star.rot, g_star.pos + d}, {g_star.rot, g_star.pos - d}};
    REQUIRE(rho_values(pair, g_star).first == Catch::Approx(d.squaredNorm()).margin(1e-14));
  }

  SECTION("world frame equals an arbitrary camera frame") {
    const auto [rho_p_w, rho_R_w] = rho_values(targets, g_star);
    REQUIRE(rho_p_w > 0.0);
    REQUIRE(rho_R_w > 0.0);
    const Pose cam{rot_exp(Vec3(0.3, -0.7, 0.2)), Vec3(4, -2, 1)};
    std::vector<Pose> in_cam;
    for (const Pose& g : targets) in_cam.push_back(cam.inverse() * g);
    const auto [rho_p_c, rho_R_c] = rho_values(in_cam, cam.inverse() * g_star);
    REQUIRE(std::abs(rho_p_c - rho_p_w) < 1e-12);
    REQUIRE(std::abs(rho_R_c - rho_R_w) < 1e-12);
  }

  SECTION("U_p and U_R are frame invariant the same way") {
    std::mt19937_64 rng(3);
    std::vector<Pose> est;
    for (int i = 0; i < 5; ++i) {
      est.push_back({random_rotation(rng), Vec3::Random()});
    }
    std::vector<Vec3> pos_w;
    std::vector<Rotation> rot_w;
    for (const Pose& g : est) {
      pos_w.push_back(g.pos);
      rot_w.push_back(g.rot);
    }
    const Pose cam{rot_exp(Vec3(-0.2, 0.4, 0.9)), Vec3(1, 2, -3)};
    std::vector<Vec3> pos_c;
    std::vector<Rotation> rot_c;
    for (const Pose& g : est) {
      const Pose c = cam.inverse() * g;
      pos_c.push_back(c.pos);
      rot_c.push_back(c.rot);
    }
    const Pose star_c = cam.inverse() * pose_average(est);
    REQUIRE(std::abs(energy_Up(pos_w, pose_average(est).pos) - energy_Up(pos_c, star_c.pos)) < 1e-12);
    REQUIRE(std::abs(energy_UR(rot_w, pose_average(est).rot) - energy_UR(rot_c, star_c.rot)) < 1e-12);
  }
}

TEST_CASE("phi_max over target orientations", "[bounds]") {
  const Rotation r = rot_exp(Vec3(0.3, 0.1, -0.2));
  REQUIRE(phi_max(std::vector<Rotation>{r, r, r}) < 1e-14);

  const double theta = 0.7;
  const std::vector<Rotation> two{rot_exp(Vec3(0, 0, 0)), rot_exp(Vec3(0, 0, theta))};
  REQUIRE(phi_max(two) == Catch::Approx(2.0 * (1.0 - std::cos(theta))).margin(1e-12));

  std::vector<Rotation> rots;
  for (const Pose& g : reference_targets()) rots.push_back(g.rot);
  const double pm = phi_max(rots);
  REQUIRE(pm > 0.0);
  REQUIRE(pm < 2.0);  // pairwise positive definite regime
}

TEST_CASE("beta from the farthest target orientation", "[bounds]") {
  const Rotation r_star = rot_exp(Vec3(0.1, 0.1, 0.1));
  REQUIRE(beta_value(std::vector<Rotation>{r_star, r_star}, r_star, 0.0) == Catch::Approx(1.0).margin(1e-7));

  // phi_h = 0.5 with c = 0 gives beta = 0 exactly
  const double theta = std::acos(1.0 - 0.25);  // phi = 2(1 - cos) = 0.5
  const std::vector<Rotation> one{r_star * rot_exp(Vec3(theta, 0, 0))};
  REQUIRE(beta_value(one, r_star, 0.0) == Catch::Approx(0.0).margin(1e-12));

  std::vector<Rotation> rots;
  for (const Pose& g : reference_targets()) rots.push_back(g.rot);
  const Rotation mean = euclidean_mean(rots);
  REQUIRE(beta_value(rots, mean, 0.0) == Catch::Approx(0.86).margin(0.01));
  // beta shrinks as the slack c grows
  REQUIRE(beta_value(rots, mean, 0.01) < beta_value(rots, mean, 0.0));
  // the farthest-from-mean distance is at most the pairwise spread, so beta
  // is bounded below through phi_m
  REQUIRE(beta_value(rots, mean, 0.0) >= 1.0 - std::sqrt(2.0 * phi_max(rots)));
  REQUIRE_THROWS_AS(beta_value(rots, mean, -1.0), std::invalid_argument);
}

TEST_CASE("theorem-1 levels", "[bounds]") {
  SECTION("weak coupling saturates at 1") {
    const auto [ep, eR] = theorem1_bounds(1.0, 0.1, 1, 0.86, 1e-4);
    REQUIRE(ep == 1.0);
    REQUIRE(eR == 1.0);
  }
  SECTION("strong coupling reproduces the known levels") {
    std::vector<Rotation> rots;
    for (const Pose& g : reference_targets()) rots.push_back(g.rot);
    const double beta = beta_value(rots, euclidean_mean(rots), 0.0);
    const auto [ep, eR] = theorem1_bounds(1.0, 100.0, 1, beta, 1e-4);
    REQUIRE(ep == Catch::Approx(0.19).margin(0.005));
    REQUIRE(eR == Catch::Approx(0.31).margin(0.005));
  }
  SECTION("limits") {
    const auto [ep, eR] = theorem1_bounds(1e-9, 1.0, 1, 1.0, 1e-9);
    REQUIRE(ep < 1e-4);
    REQUIRE(eR < 1e-4);
  }
  SECTION("monotone in k and beta on a grid") {
    double prev = -1.0;
    for (double k_e : {0.01, 0.05, 0.2, 0.5, 0.9}) {
      const auto [ep, eR] = theorem1_bounds(k_e, 1.0, 1, 0.8, 1e-3);
      REQUIRE(ep >= prev);
      prev = ep;
    }
    double prev_R = 2.0;
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto [ep, eR] = theorem1_bounds(0.05, 1.0, 1, beta, 1e-3);
      REQUIRE(eR <= prev_R);
      prev_R = eR;
    }
  }
  SECTION("domain checks") {
    REQUIRE_THROWS_AS(theorem1_bounds(0.0, 1.0, 1, 0.8, 1e-3), std::invalid_argument);
    REQUIRE_THROWS_AS(theorem1_bounds(1.0, 1.0, 1, 0.8, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(theorem1_bounds(1.0, 1.0, 1, 0.8, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(theorem1_bounds(1.0, 1.0, -1, 0.8, 1e-3), std::invalid_argument);
  }
}

TEST_CASE("mu is an increasing amplification factor", "[bounds]") {
  REQUIRE(mu_value(0.0) == 1.0);
  REQUIRE(mu_value(std::sqrt(2.0) / 2.0) == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(mu_value(1.4) == Catch::Approx(99.0).margin(0.5));
  double prev = 0.0;
  for (double g = 0.0; g < 1.4; g += 0.05) {
    const double m = mu_value(g);
    REQUIRE(m >= 1.0);
    REQUIRE(m > prev);
    prev = m;
  }
  REQUIRE_THROWS_AS(mu_value(std::sqrt(2.0)), std::domain_error);
  REQUIRE_THROWS_AS(mu_value(-0.1), std::domain_error);
}

TEST_CASE("theorem-2 levels", "[bounds]") {
  SECTION("arithmetic spot check") {
    const auto [ep, eR] = theorem2_bounds(2.0, 1.0, 0.0, 0.0, 1.0, 1.0);
    REQUIRE(ep == Catch::Approx(2.0).margin(1e-12));
  }
  SECTION("large gain limit approaches 1") {
    const auto [ep, eR] = theorem2_bounds(1e9, 1.1, 0.5, 0.5, 0.2, 0.2);
    REQUIRE(ep == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(eR == Catch::Approx(1.0).margin(1e-6));
  }
  SECTION("decreasing in k_e") {
    const auto [ep3, eR3] = theorem2_bounds(3.0, 1.003, 0.2, 0.8, 0.178, 0.031);
    const auto [ep30, eR30] = theorem2_bounds(30.0, 1.003, 0.2, 0.8, 0.178, 0.031);
    REQUIRE(ep30 < ep3);
    REQUIRE(eR30 < eR3);
    REQUIRE(ep3 > 1.0);
    REQUIRE(eR3 > 1.0);
  }
  SECTION("gain threshold") {
    REQUIRE_THROWS_WITH(theorem2_bounds(1.0, 1.1, 0.1, 0.1, 1.0, 1.0),
                        Catch::Matchers::ContainsSubstring("gain below tracking threshold"));
    REQUIRE_THROWS_AS(theorem2_bounds(2.0, 1.5, 0.1, 0.1, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(theorem2_bounds(2.0, 1.1, 0.1, 0.1, 0.0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("average motion of identical and of still targets", "[bounds]") {
  const std::vector<Pose> targets = reference_targets();
  SECTION("all twists zero") {
    const std::vector<Twist> still(targets.size());
    const AverageMotionStep step = average_motion_step(targets, still, 1e-3);
    REQUIRE(step.p_star_dot.norm() < 1e-14);
    REQUIRE(step.omega_star.norm() < 1e-10);
    REQUIRE((step.e_star_next - pose_average(targets).rot).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("identical targets move with the common twist") {
    const Pose g{rot_exp(Vec3(0.2, -0.3, 0.1)), Vec3(1, 0, -2)};
    const Twist tw{Vec3(0.3, 0.0, -0.1), Vec3(0.0, 0.2, 0.5)};
    const std::vector<Pose> same{g, g, g};
    const std::vector<Twist> twists{tw, tw, tw};
    const AverageMotionStep step = average_motion_step(same, twists, 1e-4);
    REQUIRE((step.omega_star - tw.w).norm() < 1e-3);  // O(dt) finite-difference defect
    REQUIRE((step.p_star_dot - g.rot * tw.v).norm() < 1e-12);
    REQUIRE(step.gamma_now < 1e-12);
  }
  SECTION("mean linear velocity bound") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      // orientations in a cone around a common base, so the matrix mean
      // stays projectable
      const Rotation base = random_rotation(rng);
      std::vector<Pose> gs;
      std::vector<Twist> ts;
      double w_p_sq = 0.0;
      for (int i = 0; i < 5; ++i) {
        gs.push_back({Rotation(base * random_rotation(rng, 0.8)), Vec3::Random()});
        ts.push_back(nvmo_test::random_twist(rng));
        w_p_sq += ts.back().v.squaredNorm();
      }
      const AverageMotionStep step = average_motion_step(gs, ts, 1e-3);
      // ||v^{b,*}||^2 = ||p_star_dot||^2 <= ||w_p||^2 / n
      REQUIRE(step.p_star_dot.squaredNorm() <= w_p_sq / 5.0 + 1e-12);
    }
  }
}

TEST_CASE("omega bound along the rotating-target trajectory", "[bounds]") {
  const Scenario sc = nvmo_test::reference_moving_scenario();
  std::vector<Pose> targets;
  std::vector<Twist> twists;
  for (const TargetSpec& t : sc.targets) {
    targets.push_back(t.initial_pose);
    twists.push_back(t.velocity.at(0.0));
  }
  double w_R_sq = 0.0;
  for (const Twist& t : twists) w_R_sq += t.w.squaredNorm();
  for (int step = 0; step < 2000; ++step) {
    const AverageMotionStep am = average_motion_step(targets, twists, sc.dt);
    const double mu = mu_value(am.gamma_now);
    REQUIRE(am.omega_star.squaredNorm() < mu * mu / 5.0 * w_R_sq);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      targets[i] = world_step(targets[i], twists[i], sc.dt);
    }
  }
}

TEST_CASE("averaging report assembles the pieces", "[bounds]") {
  const std::vector<Pose> targets = reference_targets();
  const AveragingReport rep = make_averaging_report(targets, 1.0, 100.0, 1, 0.0, 1e-4);
  REQUIRE(rep.k == Catch::Approx(0.01).margin(1e-15));
  REQUIRE(rep.w_const == 1);
  REQUIRE(rep.beta == Catch::Approx(0.86).margin(0.01));
  REQUIRE(rep.eps_p == Catch::Approx(0.19).margin(0.005));
  REQUIRE(rep.eps_R == Catch::Approx(0.31).margin(0.005));
  const auto [rho_p, rho_R] = rho_values(targets, pose_average(targets));
  REQUIRE(rep.rho_p == Catch::Approx(rho_p).margin(1e-15));
  REQUIRE(rep.rho_R == Catch::Approx(rho_R).margin(1e-15));
}

TEST_CASE("epsilon-set membership is the energy inequality", "[bounds]") {
  // boundary behavior of the membership predicate U <= eps * rho
  const double rho = 0.5, eps = 0.19;
  auto inside = [&](double u) { return u <= eps * rho; };
  REQUIRE(inside(eps * rho));
  REQUIRE(inside(eps * rho - 1e-15));
  REQUIRE_FALSE(inside(eps * rho + 1e-15));
  REQUIRE(inside(0.0));
}
