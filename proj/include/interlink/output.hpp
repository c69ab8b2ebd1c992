#pragma once

// Plot-ready CSV and JSON emitters. CSV numbers carry 9 significant digits
// (printf %.9g), which is locale-independent and stable across runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "interlink/benchmark.hpp"
#include "interlink/dse.hpp"
#include "interlink/errors.hpp"
#include "interlink/metrics.hpp"

namespace interlink {

using ordered_json = nlohmann::ordered_json;

inline std::string format_sig9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Writes to a sibling temporary file, then renames over the target.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw DataError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move output into place at '" + path.string() + "'");
  }
}

inline constexpr std::string_view kGridCsvHeader =
    "x_param,x_hz,y_param,y_hz,cooperativity,efficiency,infidelity,latency_s,fom,flags";

inline std::string grid_csv(const SweepGrid& grid) {
  std::string out(kGridCsvHeader);
  out += '\n';
  const std::string xp = parameter_name(grid.x_axis.param);
  const std::string yp = parameter_name(grid.y_axis.param);
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
      const MetricSet& m = grid.at(ix, iy);
      out += xp + ',' + format_sig9(grid.xs[ix]) + ',' + yp + ',' + format_sig9(grid.ys[iy]) + ',' +
             format_sig9(m.cooperativity) + ',' + format_sig9(m.efficiency) + ',' + format_sig9(m.infidelity) + ',' +
             format_sig9(m.latency) + ',' + format_sig9(m.fom) + ',' + m.flags.to_string() + '\n';
    }
  }
  return out;
}

inline void write_grid_csv(const SweepGrid& grid, const std::filesystem::path& path) {
  write_file_atomic(path, grid_csv(grid));
}

inline ordered_json metrics_json(const MetricSet& m) {
  return ordered_json{{"cooperativity", m.cooperativity}, {"efficiency", m.efficiency}, {"infidelity", m.infidelity},
                      {"latency_s", m.latency},         {"fom", m.fom},               {"flags", m.flags.tags()}};
}

inline ordered_json environment_json(const EnvironmentDefaults& env) {
  return ordered_json{
      {"kappa_ex_hz", env.kappa_ex}, {"i_g_prime_hz", env.i_g_prime}, {"delta_hz", env.delta}, {"alpha", env.alpha}};
}

inline ordered_json grid_json(const SweepGrid& grid, const OptimalRegion* region = nullptr) {
  ordered_json j;
  auto axis = [](const SweepAxis& a, const std::vector<double>& v) {
    return ordered_json{{"param", parameter_name(a.param)}, {"min_hz", a.min}, {"max_hz", a.max}, {"count", a.count},
                        {"values_hz", v}};
  };
  j["x_axis"] = axis(grid.x_axis, grid.xs);
  j["y_axis"] = axis(grid.y_axis, grid.ys);
  j["environment"] = environment_json(grid.fixed.env);
  j["held"] = ordered_json{{"g_hz", grid.fixed.g}, {"kappa_hz", grid.fixed.kappa}, {"gamma_hz", grid.fixed.gamma}};
  ordered_json cells = ordered_json::array();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
      ordered_json c = metrics_json(grid.at(ix, iy));
      c["ix"] = ix;
      c["iy"] = iy;
      cells.push_back(std::move(c));
    }
  }
  j["cells"] = std::move(cells);
  if (region) {
    ordered_json r;
    r["qualifying_nodes"] = region->nodes.size();
    if (region->best) {
      r["best"] = ordered_json{{"ix", region->best->ix},
                               {"iy", region->best->iy},
                               {"x_hz", grid.xs[region->best->ix]},
                               {"y_hz", grid.ys[region->best->iy]},
                               {"fom", region->best_fom}};
    }
    j["optimal_region"] = std::move(r);
  }
  return j;
}

inline constexpr std::string_view kContourCsvHeader = "metric,level,polyline,closed,vertex,x_param,x_hz,y_param,y_hz";

inline std::string contours_csv(const std::vector<ContourPolyline>& lines, Parameter xp, Parameter yp) {
  std::string out(kContourCsvHeader);
  out += '\n';
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& line = lines[li];
    for (std::size_t vi = 0; vi < line.vertices.size(); ++vi) {
      out += std::string(metric_name(line.metric)) + ',' + format_sig9(line.level) + ',' + std::to_string(li) + ',' +
             (line.closed ? "1" : "0") + ',' + std::to_string(vi) + ',' + parameter_name(xp) + ',' +
             format_sig9(line.vertices[vi].x) + ',' + parameter_name(yp) + ',' + format_sig9(line.vertices[vi].y) +
             '\n';
    }
  }
  return out;
}

inline ordered_json contours_json(const std::vector<ContourPolyline>& lines, Parameter xp, Parameter yp) {
  ordered_json arr = ordered_json::array();
  for (const auto& line : lines) {
    ordered_json v = ordered_json::array();
    for (const auto& p : line.vertices) v.push_back({p.x, p.y});
    arr.push_back(ordered_json{{"metric", metric_name(line.metric)},
                               {"level", line.level},
                               {"closed", line.closed},
                               {"x_param", parameter_name(xp)},
                               {"y_param", parameter_name(yp)},
                               {"vertices_hz", std::move(v)}});
  }
  return ordered_json{{"polylines", std::move(arr)}};
}

inline constexpr std::string_view kBenchCsvHeader =
    "rank,name,qubit_type,reference,g_hz,kappa_hz,gamma_hz,cooperativity,efficiency,infidelity,latency_s,fom,regime,"
    "coupling_margin,flags,status";

// Ranked records first (rank order), then unranked records in registry order.
inline std::string bench_csv(const BenchmarkReport& report) {
  std::string out(kBenchCsvHeader);
  out += '\n';
  auto row = [&](const BenchmarkEntry& e, const std::string& rank) {
    const auto& r = e.record;
    std::string s = rank + ',' + detail::csv_escape(r.name) + ',' + qubit_type_name(r.qubit_type) + ',' +
                    detail::csv_escape(r.reference) + ',' + format_sig9(r.g) + ',' + format_sig9(r.kappa) + ',' +
                    (r.gamma ? format_sig9(*r.gamma) : "") + ',';
    if (e.metrics) {
      const auto& m = *e.metrics;
      s += format_sig9(m.cooperativity) + ',' + format_sig9(m.efficiency) + ',' + format_sig9(m.infidelity) + ',' +
           format_sig9(m.latency) + ',' + format_sig9(m.fom) + ',' + regime_name(e.regime->regime) + ',' +
           format_sig9(*e.margin) + ',' + m.flags.to_string() + ",ranked";
    } else {
      s += ",,,,,,,," + e.omitted_reason;
    }
    return s + '\n';
  };
  for (std::size_t i = 0; i < report.ranking.size(); ++i) {
    for (const auto& e : report.entries) {
      if (e.record.name == report.ranking[i].name) out += row(e, std::to_string(i + 1));
    }
  }
  for (const auto& e : report.entries) {
    if (!e.metrics) out += row(e, "");
  }
  return out;
}

inline constexpr std::string_view kOverlayCsvHeader = "name,qubit_type,plane,x_param,x_hz,y_param,y_hz";

inline std::string overlay_csv(const std::vector<OverlayPoint>& points, Plane plane) {
  std::string out(kOverlayCsvHeader);
  out += '\n';
  const char* yp = plane == Plane::GKappa ? "kappa" : "gamma";
  for (const auto& p : points) {
    out += detail::csv_escape(p.name) + ',' + qubit_type_name(p.qubit_type) + ',' + plane_name(plane) + ",g," +
           format_sig9(p.x) + ',' + yp + ',' + format_sig9(p.y) + '\n';
  }
  return out;
}

inline ordered_json bench_json(const BenchmarkReport& report, const std::vector<OverlayPoint>& gk,
                               const std::vector<OverlayPoint>& ggamma) {
  ordered_json j;
  j["environment"] = environment_json(report.env);
  j["thresholds"] = ordered_json{{"r_much_greater", report.thresholds.r_much_greater},
                                 {"t_approx", report.thresholds.t_approx}};
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json o{{"name", e.record.name},
                   {"qubit_type", qubit_type_name(e.record.qubit_type)},
                   {"reference", e.record.reference},
                   {"g_hz", e.record.g},
                   {"kappa_hz", e.record.kappa},
                   {"gamma_hz", e.record.gamma ? ordered_json(*e.record.gamma) : ordered_json(nullptr)}};
    if (e.metrics) {
      o["metrics"] = metrics_json(*e.metrics);
      o["regime"] = regime_name(e.regime->regime);
      if (!e.regime->reason.empty()) o["regime_reason"] = e.regime->reason;
      o["coupling_margin"] = *e.margin;
    } else {
      o["omitted_reason"] = e.omitted_reason;
    }
    entries.push_back(std::move(o));
  }
  j["entries"] = std::move(entries);
  ordered_json ranking = ordered_json::array();
  for (const auto& r : report.ranking) ranking.push_back(ordered_json{{"name", r.name}, {"fom", r.fom}});
  j["ranking"] = std::move(ranking);
  ordered_json omitted = ordered_json::array();
  for (const auto& [name, reason] : report.omitted) omitted.push_back(ordered_json{{"name", name}, {"reason", reason}});
  j["omitted"] = std::move(omitted);
  auto overlay = [](const std::vector<OverlayPoint>& pts) {
    ordered_json a = ordered_json::array();
    for (const auto& p : pts) {
      a.push_back(ordered_json{{"name", p.name}, {"qubit_type", qubit_type_name(p.qubit_type)}, {"x_hz", p.x}, {"y_hz", p.y}});
    }
    return a;
  };
  j["overlay"] = ordered_json{{"gk", overlay(gk)}, {"ggamma", overlay(ggamma)}};
  return j;
}

inline constexpr std::string_view kSensitivityCsvHeader = "kappa_hz,gamma_hz,strong_threshold_g_hz,g_hz,fom,loglog_slope";

inline std::string sensitivity_csv(const std::vector<SensitivitySeries>& series) {
  std::string out(kSensitivityCsvHeader);
  out += '\n';
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.g_values.size(); ++i) {
      out += format_sig9(s.kappa) + ',' + format_sig9(s.gamma) + ',' + format_sig9(s.strong_threshold_g) + ',' +
             format_sig9(s.g_values[i]) + ',' + format_sig9(s.fom_values[i]) + ',' +
             (s.loglog_slopes[i] ? format_sig9(*s.loglog_slopes[i]) : "") + '\n';
    }
  }
  return out;
}

inline ordered_json sensitivity_json(const std::vector<SensitivitySeries>& series) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : series) {
    ordered_json slopes = ordered_json::array();
    for (const auto& v : s.loglog_slopes) slopes.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
    arr.push_back(ordered_json{{"kappa_hz", s.kappa},
                               {"gamma_hz", s.gamma},
                               {"strong_threshold_g_hz", s.strong_threshold_g},
                               {"g_hz", s.g_values},
                               {"fom", s.fom_values},
                               {"loglog_slope", std::move(slopes)}});
  }
  return ordered_json{{"series", std::move(arr)}};
}

// Minimal matplotlib script that renders one of the CSV outputs.
inline std::string plot_script(std::string_view kind, std::string_view csv_name) {
  std::string s =
      "#!/usr/bin/env python3\n"
      "# Renders " + std::string(csv_name) + " (" + std::string(kind) + " output).\n"
      "import csv\nimport sys\nfrom collections import defaultdict\n\n"
      "import matplotlib.pyplot as plt\n\n"
      "path = sys.argv[1] if len(sys.argv) > 1 else \"" + std::string(csv_name) + "\"\n"
      "rows = list(csv.DictReader(open(path)))\n"
      "fig, ax = plt.subplots()\nax.set_xscale(\"log\")\nax.set_yscale(\"log\")\n";
  if (kind == "sweep") {
    s += "xs = [float(r[\"x_hz\"]) for r in rows]\nys = [float(r[\"y_hz\"]) for r in rows]\n"
         "zs = [float(r[\"fom\"]) for r in rows]\n"
         "sc = ax.scatter(xs, ys, c=[max(z, 1e-300) for z in zs], s=4, norm=\"log\")\n"
         "fig.colorbar(sc, label=\"fom\")\nax.set_xlabel(rows[0][\"x_param\"] + \" (Hz)\")\n"
         "ax.set_ylabel(rows[0][\"y_param\"] + \" (Hz)\")\n";
  } else if (kind == "contour") {
    s += "lines = defaultdict(list)\nfor r in rows:\n"
         "    lines[(r[\"level\"], r[\"polyline\"])].append((float(r[\"x_hz\"]), float(r[\"y_hz\"])))\n"
         "for (level, _), pts in lines.items():\n"
         "    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=level)\n"
         "ax.set_xlabel(rows[0][\"x_param\"] + \" (Hz)\" if rows else \"\")\n"
         "ax.set_ylabel(rows[0][\"y_param\"] + \" (Hz)\" if rows else \"\")\n";
  } else if (kind == "sens") {
    s += "series = defaultdict(list)\nfor r in rows:\n"
         "    if float(r[\"fom\"]) > 0:\n"
         "        series[(r[\"kappa_hz\"], r[\"gamma_hz\"])].append((float(r[\"g_hz\"]), float(r[\"fom\"])))\n"
         "for (k, gm), pts in series.items():\n"
         "    ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f\"kappa={k}, gamma={gm}\")\n"
         "ax.set_xlabel(\"g (Hz)\")\nax.set_ylabel(\"fom\")\n";
  } else {
    s += "for r in rows:\n"
         "    ax.scatter(float(r[\"x_hz\"]), float(r[\"y_hz\"]), label=r[\"name\"])\n"
         "ax.set_xlabel(\"g (Hz)\")\nax.set_ylabel(rows[0][\"y_param\"] + \" (Hz)\" if rows else \"\")\n";
  }
  s += "ax.legend(fontsize=\"small\")\nfig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  return s;
}

}  // namespace interlink
