#include "nvmo/nvmo.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

bool log_enabled() {
  const char* v = std::getenv("NVMO_LOG");
  return v != nullptr && std::string(v) != "" && std::string(v) != "off";
}

void log_line(const std::string& msg) {
  if (log_enabled()) std::cerr << "[nvmo] " << msg << '\n';
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir, std::uint64_t seed,
                 bool emit_svg, double dt_override, double horizon_override) {
  nvmo::Scenario sc = nvmo::load_scenario(scenario_path);
  if (dt_override > 0.0) sc.dt = dt_override;
  if (horizon_override > 0.0) sc.horizon = horizon_override;
  sc.validate();
  log_line("scenario loaded: " + scenario_path);

  const auto t0 = std::chrono::steady_clock::now();
  const nvmo::SimResult result = nvmo::run(sc, seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log_line("run finished in " + std::to_string(secs) + " s, " +
           std::to_string(result.records.size()) + " records");

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(out_dir + "/metrics.csv");
    nvmo::write_metrics_csv(csv, result);
  }
  const nvmo::Assumption1Flags flags = nvmo::validate_assumption1(sc.graph);
  {
    std::ofstream summary(out_dir + "/summary.txt");
    summary << "scenario: " << scenario_path << '\n';
    nvmo::write_summary(summary, sc, result, flags);
  }
  if (emit_svg) {
    std::vector<std::pair<double, double>> up, ur, bp, bR;
    for (const nvmo::MetricsRecord& r : result.records) {
      up.emplace_back(r.t, r.U_p);
      ur.emplace_back(r.t, r.U_R);
      bp.emplace_back(r.t, r.eps_bound_p);
      bR.emplace_back(r.t, r.eps_bound_R);
    }
    std::ofstream f1(out_dir + "/u_p.svg");
    nvmo::write_svg_plot(f1, "U_p with averaging bound", up, bp);
    std::ofstream f2(out_dir + "/u_r.svg");
    nvmo::write_svg_plot(f2, "U_R with averaging bound", ur, bR);
  }
  std::ifstream summary(out_dir + "/summary.txt");
  std::cout << summary.rdbuf();
  std::cout << "wrote " << out_dir << "/metrics.csv and " << out_dir << "/summary.txt";
  if (emit_svg) std::cout << " and SVG plots";
  std::cout << '\n';
  return 0;
}

int cmd_bounds(const std::string& scenario_path, double epsilon, double c) {
  const nvmo::Scenario sc = nvmo::load_scenario(scenario_path);
  const int w = nvmo::compute_W(sc.graph).w;
  std::vector<nvmo::Pose> targets;
  for (const nvmo::TargetSpec& t : sc.targets) targets.push_back(t.initial_pose);
  const nvmo::AveragingReport avg = nvmo::make_averaging_report(targets, sc.k_e, sc.k_s, w, c, epsilon);
  nvmo::print_report_text(std::cout, "averaging report", nvmo::to_json(avg));
  nlohmann::json j{{"averaging", nvmo::to_json(avg)}};
  if (sc.any_moving()) {
    const nvmo::TrackingReport tr = nvmo::tracking_report(sc);
    nvmo::print_report_text(std::cout, "tracking report", nvmo::to_json(tr));
    j["tracking"] = nvmo::to_json(tr);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_graph(const std::string& scenario_path) {
  // lenient load: the point of this command is to diagnose the graph, so a
  // scenario failing the balance/connectivity assumption must still print
  const nvmo::Scenario sc = nvmo::load_scenario(scenario_path, /*validate=*/false);
  sc.graph.validate();
  const nvmo::Assumption1Flags flags = nvmo::validate_assumption1(sc.graph);
  std::cout << "nodes: " << sc.graph.n << "  edges: " << sc.graph.edges.size() << '\n';
  std::cout << "balanced: " << (flags.balanced ? "yes" : "no")
            << "  strongly_connected: " << (flags.strongly_connected ? "yes" : "no") << '\n';
  const nvmo::WResult res = nvmo::compute_W(sc.graph);
  std::cout << "W: " << res.w << "  (witness root " << res.witness.root << ")\n";
  for (const auto& [edge, load] : res.witness.per_edge_load) {
    std::cout << "  tree edge {" << edge.first << "," << edge.second << "}  load " << load << '\n';
  }
  if (!flags.ok()) {
    std::cerr << "error: communication graph violates the balance/connectivity assumption\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"networked visual motion observer simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  std::uint64_t seed = 0;
  bool emit_svg = false;
  double dt_override = 0.0, horizon_override = 0.0, epsilon = nvmo::kDefaultTheorem1Epsilon,
         c = nvmo::kDefaultLemmaSlackC;

  CLI::App* sim = app.add_subcommand("simulate", "run a scenario and write metrics/summary");
  sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
  sim->add_option("--out", out_dir, "output directory (default: out)");
  sim->add_option("--seed", seed, "noise seed (default: 0)");
  sim->add_flag("--svg", emit_svg, "also write SVG line plots");
  sim->add_option("--dt", dt_override, "override integration step [s]");
  sim->add_option("--horizon", horizon_override, "override horizon [s]");

  CLI::App* bounds = app.add_subcommand("bounds", "print averaging/tracking performance reports");
  bounds->add_option("scenario", scenario_path, "scenario JSON file")->required();
  bounds->add_option("--epsilon", epsilon, "slack of the averaging levels, in (0,1)");
  bounds->add_option("--c", c, "orientation-spread slack used in beta");

  CLI::App* graph = app.add_subcommand("graph", "analyze the communication graph");
  graph->add_option("scenario", scenario_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario_path, out_dir, seed, emit_svg, dt_override, horizon_override);
    if (bounds->parsed()) return cmd_bounds(scenario_path, epsilon, c);
    if (graph->parsed()) return cmd_graph(scenario_path);
  } catch (const nvmo::ValidationError& ex) {
    std::cerr << "validation error: " << ex.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "validation error: " << ex.what() << '\n';
    return 1;
  } catch (const std::domain_error& ex) {
    std::cerr << "validation error: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "runtime error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
