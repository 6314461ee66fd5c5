#pragma once

#include "nvmo/bounds.hpp"
#include "nvmo/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nvmo {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_metrics_csv(std::ostream& out, const SimResult& result) {
  const std::size_t n = result.records.empty() ? 0 : result.records.front().err_cam.size();
  out << "t,U_p,U_R,rho_p,rho_R,eps_bound_p,eps_bound_R,min_eig_S";
  for (std::size_t i = 1; i <= n; ++i) out << ",err_cam_" << i;
  out << ",gamma,min_eig_pairwise,assumptions_ok\n";
  for (const MetricsRecord& r : result.records) {
    out << fmt_double(r.t) << ',' << fmt_double(r.U_p) << ',' << fmt_double(r.U_R) << ','
        << fmt_double(r.rho_p) << ',' << fmt_double(r.rho_R) << ',' << fmt_double(r.eps_bound_p)
        << ',' << fmt_double(r.eps_bound_R) << ',' << fmt_double(r.min_eig_S);
    for (double e : r.err_cam) out << ',' << fmt_double(e);
    out << ',' << fmt_double(r.gamma) << ',' << fmt_double(r.min_eig_pairwise) << ','
        << (r.assumptions_ok ? 1 : 0) << '\n';
  }
}

/// Earliest time from which the series stays at or below its bound through
/// the end of the run; negative if the last sample still violates it.
inline double containment_time(const std::vector<MetricsRecord>& recs,
                               double MetricsRecord::* value, double MetricsRecord::* bound) {
  if (recs.empty()) return -1.0;
  std::ptrdiff_t last_bad = -1;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(recs.size()); ++i) {
    if (recs[i].*value > recs[i].*bound) last_bad = i;
  }
  if (last_bad < 0) return recs.front().t;
  if (last_bad + 1 >= static_cast<std::ptrdiff_t>(recs.size())) return -1.0;
  return recs[last_bad + 1].t;
}

inline double containment_time_const(const std::vector<MetricsRecord>& recs,
                                     double MetricsRecord::* value, double bound) {
  if (recs.empty()) return -1.0;
  std::ptrdiff_t last_bad = -1;
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(recs.size()); ++i) {
    if (recs[i].*value > bound) last_bad = i;
  }
  if (last_bad < 0) return recs.front().t;
  if (last_bad + 1 >= static_cast<std::ptrdiff_t>(recs.size())) return -1.0;
  return recs[last_bad + 1].t;
}

inline void write_summary(std::ostream& out, const Scenario& sc, const SimResult& result,
                          const Assumption1Flags& flags) {
  const MetricsRecord& last = result.records.back();
  out << "cameras: " << sc.size() << "  dt: " << sc.dt << "  horizon: " << sc.horizon
      << "  noise_std: " << sc.noise_std << '\n';
  out << "graph: balanced=" << (flags.balanced ? "yes" : "no")
      << " strongly_connected=" << (flags.strongly_connected ? "yes" : "no")
      << " W=" << result.w_const << '\n';
  out << "gains: k_e=" << sc.k_e << " k_s=" << sc.k_s << " (k=" << sc.k_e / sc.k_s << ")\n";
  out << "averaging levels (c=" << kDefaultLemmaSlackC << ", epsilon=" << kDefaultTheorem1Epsilon
      << "): eps_p=" << result.eps_p << " eps_R=" << result.eps_R << '\n';
  out << "final: t=" << last.t << " U_p=" << last.U_p << " U_R=" << last.U_R
      << " rho_p=" << last.rho_p << " rho_R=" << last.rho_R << '\n';

  auto verdict = [&out](const std::string& name, double t_in) {
    out << name;
    if (t_in >= 0.0) {
      out << ": entered at t=" << t_in << " and stayed through the horizon\n";
    } else {
      out << ": not attained by the end of the run\n";
    }
  };
  {
    std::ostringstream name;
    name << "Omega_p(" << result.eps_p << ")";
    verdict(name.str(), containment_time(result.records, &MetricsRecord::U_p, &MetricsRecord::eps_bound_p));
  }
  {
    std::ostringstream name;
    name << "Omega_R(" << result.eps_R << ")";
    verdict(name.str(), containment_time(result.records, &MetricsRecord::U_R, &MetricsRecord::eps_bound_R));
  }
  verdict("Omega_p(1)", containment_time(result.records, &MetricsRecord::U_p, &MetricsRecord::rho_p));
  verdict("Omega_R(1)", containment_time(result.records, &MetricsRecord::U_R, &MetricsRecord::rho_R));

  double min_S = std::numeric_limits<double>::infinity();
  double first_flag_violation = -1.0;
  for (const MetricsRecord& r : result.records) {
    min_S = std::min(min_S, r.min_eig_S);
    if (!r.assumptions_ok && first_flag_violation < 0.0) first_flag_violation = r.t;
  }
  out << "invariant set S: min eig over run = " << min_S
      << (min_S > 0.0 ? " (preserved)" : " (violated)") << '\n';
  if (first_flag_violation < 0.0) {
    out << "assumption flags: ok throughout\n";
  } else {
    out << "assumption flags: first violation at t=" << first_flag_violation << '\n';
  }

  if (sc.any_moving()) {
    const TrackingReport tr = tracking_report(sc);
    out << "tracking: rho_p_sup=" << tr.rho_p_sup << " rho_R_sup=" << tr.rho_R_sup
        << " w_bar_p=" << tr.w_bar_p << " w_bar_R=" << tr.w_bar_R << " gamma=" << tr.gamma
        << " mu=" << tr.mu << '\n';
    out << "tracking levels: eps_p'=" << tr.eps_p_track << " eps_R'=" << tr.eps_R_track << '\n';
    const double bp = tr.eps_p_track * tr.rho_p_sup;
    const double bR = tr.eps_R_track * tr.rho_R_sup;
    verdict("Omega_p'(eps_p')", containment_time_const(result.records, &MetricsRecord::U_p, bp));
    verdict("Omega_R'(eps_R')", containment_time_const(result.records, &MetricsRecord::U_R, bR));
  }
}

/// Minimal standalone SVG line chart with a log10 y-axis: one solid series
/// and one dashed bound overlay.
inline void write_svg_plot(std::ostream& out, const std::string& title,
                           const std::vector<std::pair<double, double>>& series,
                           const std::vector<std::pair<double, double>>& bound) {
  const int width = 720, height = 420, ml = 70, mr = 20, mt = 40, mb = 50;
  double t_max = 1.0, y_min = 1e300, y_max = -1e300;
  auto scan = [&](const std::vector<std::pair<double, double>>& s) {
    for (const auto& [t, v] : s) {
      t_max = std::max(t_max, t);
      const double y = std::log10(std::max(v, 1e-12));
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  };
  scan(series);
  scan(bound);
  if (y_max <= y_min) y_max = y_min + 1.0;
  auto px = [&](double t) { return ml + t / t_max * (width - ml - mr); };
  auto py = [&](double v) {
    const double y = std::log10(std::max(v, 1e-12));
    return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb);
  };
  auto path = [&](const std::vector<std::pair<double, double>>& s) {
    std::ostringstream d;
    for (std::size_t i = 0; i < s.size(); ++i) {
      d << (i == 0 ? 'M' : 'L') << px(s[i].first) << ' ' << py(s[i].second) << ' ';
    }
    return d.str();
  };
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-family='sans-serif' font-size='16'>"
      << title << "</text>\n";
  out << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr << "' y2='" << height - mb
      << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << height - mb
      << "' stroke='black'/>\n";
  for (int k = static_cast<int>(std::ceil(y_min)); k <= static_cast<int>(std::floor(y_max)); ++k) {
    const double y = py(std::pow(10.0, k));
    out << "<line x1='" << ml - 4 << "' y1='" << y << "' x2='" << ml << "' y2='" << y << "' stroke='black'/>\n";
    out << "<text x='" << ml - 8 << "' y='" << y + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='11'>1e" << k << "</text>\n";
  }
  for (double t = 0.0; t <= t_max + 1e-9; t += t_max / 5.0) {
    out << "<line x1='" << px(t) << "' y1='" << height - mb << "' x2='" << px(t) << "' y2='"
        << height - mb + 4 << "' stroke='black'/>\n";
    out << "<text x='" << px(t) << "' y='" << height - mb + 18
        << "' text-anchor='middle' font-family='sans-serif' font-size='11'>" << t << "</text>\n";
  }
  out << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 12
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>t [s]</text>\n";
  out << "<path d='" << path(series) << "' fill='none' stroke='#1f4f9f' stroke-width='1.5'/>\n";
  if (!bound.empty()) {
    out << "<path d='" << path(bound) << "' fill='none' stroke='#b03030' stroke-width='1.2' "
        << "stroke-dasharray='8 5'/>\n";
  }
  out << "</svg>\n";
}

inline nlohmann::json to_json(const AveragingReport& r) {
  return {{"rho_p", r.rho_p}, {"rho_R", r.rho_R}, {"beta", r.beta},   {"phi_m", r.phi_m},
          {"k", r.k},         {"W", r.w_const},   {"eps_p", r.eps_p}, {"eps_R", r.eps_R}};
}

inline nlohmann::json to_json(const TrackingReport& r) {
  return {{"rho_p_sup", r.rho_p_sup}, {"rho_R_sup", r.rho_R_sup}, {"w_bar_p", r.w_bar_p},
          {"w_bar_R", r.w_bar_R},     {"gamma", r.gamma},         {"mu", r.mu},
          {"eps_p_track", r.eps_p_track}, {"eps_R_track", r.eps_R_track}};
}

inline void print_report_text(std::ostream& out, const std::string& heading, const nlohmann::json& j) {
  out << heading << '\n';
  std::size_t w = 0;
  for (auto it = j.begin(); it != j.end(); ++it) w = std::max(w, it.key().size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    out << "  " << it.key() << std::string(w - it.key().size() + 2, ' ') << it.value().dump() << '\n';
  }
}

}  // namespace nvmo
