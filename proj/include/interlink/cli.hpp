#pragma once

// Command dispatch for the interlink-dse tool. Exit status: 0 success,
// 1 configuration error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "interlink/benchmark.hpp"
#include "interlink/config.hpp"
#include "interlink/dse.hpp"
#include "interlink/errors.hpp"
#include "interlink/metrics.hpp"
#include "interlink/output.hpp"
#include "interlink/regimes.hpp"

namespace interlink {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitData = 2;

enum class Command { Eval, Sweep, Contour, Bench, Sens };

namespace detail {

inline std::filesystem::path output_path(const RunConfig& cfg, const std::string& stem) {
  return std::filesystem::path(cfg.outdir) / (stem + (cfg.format == OutputFormat::Json ? ".json" : ".csv"));
}

inline void emit(const RunConfig& cfg, const std::string& stem, const std::string& kind, const std::string& csv,
                 const ordered_json& json, std::ostream& out) {
  const auto path = output_path(cfg, stem);
  write_file_atomic(path, cfg.format == OutputFormat::Json ? json.dump(2) + "\n" : csv);
  out << "wrote " << path.string() << '\n';
  if (cfg.plot_script && cfg.format == OutputFormat::Csv) {
    const auto script = std::filesystem::path(cfg.outdir) / ("plot_" + stem + ".py");
    write_file_atomic(script, plot_script(kind, path.filename().string()));
    out << "wrote " << script.string() << '\n';
  }
}

inline int run_eval(const RunConfig& cfg, std::ostream& out) {
  const OperatingPoint p = cfg.point();
  const MetricSet m = evaluate_point(p, cfg.env.alpha);
  const RegimeLabel label = classify_regime(p.g, p.kappa, p.gamma, cfg.thresholds);
  const double margin = coupling_margin(p.g, p.kappa, p.gamma);
  if (cfg.format == OutputFormat::Json) {
    ordered_json j{{"point", ordered_json{{"g_hz", p.g},
                                          {"kappa_hz", p.kappa},
                                          {"gamma_hz", p.gamma},
                                          {"g_eff_hz", p.effective_coupling()}}},
                   {"environment", environment_json(cfg.env)},
                   {"metrics", metrics_json(m)},
                   {"regime", regime_name(label.regime)},
                   {"coupling_margin", margin}};
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "g_hz = " << format_sig9(p.g) << '\n'
      << "kappa_hz = " << format_sig9(p.kappa) << '\n'
      << "gamma_hz = " << format_sig9(p.gamma) << '\n'
      << "cooperativity = " << format_sig9(m.cooperativity) << '\n'
      << "efficiency = " << format_sig9(m.efficiency) << '\n'
      << "infidelity = " << format_sig9(m.infidelity) << '\n'
      << "latency_s = " << format_sig9(m.latency) << '\n'
      << "fom = " << format_sig9(m.fom) << '\n'
      << "flags = " << m.flags.to_string() << '\n'
      << "regime = " << regime_name(label.regime) << '\n'
      << "coupling_margin = " << format_sig9(margin) << '\n';
  return kExitOk;
}

inline int run_sweep(const RunConfig& cfg, std::ostream& out) {
  const SweepGrid grid = sweep_2d(cfg.x_axis(), cfg.y_axis(), cfg.sweep_fixed(), cfg.workers);
  const OptimalRegion region = find_optimal_region(grid, cfg.eff_min, cfg.inf_max);
  emit(cfg, std::string("sweep_") + plane_name(cfg.plane), "sweep", grid_csv(grid), grid_json(grid, &region), out);
  if (region.best) {
    out << "max fom = " << format_sig9(region.best_fom) << " at " << parameter_name(grid.x_axis.param) << " = "
        << format_sig9(grid.xs[region.best->ix]) << " Hz, " << parameter_name(grid.y_axis.param) << " = "
        << format_sig9(grid.ys[region.best->iy]) << " Hz\n";
  }
  out << "nodes with efficiency >= " << format_sig9(cfg.eff_min) << " and infidelity <= " << format_sig9(cfg.inf_max)
      << ": " << region.nodes.size() << '\n';
  return kExitOk;
}

inline int run_contour(const RunConfig& cfg, std::ostream& out) {
  const auto levels = cfg.contour_levels();
  if (levels.empty()) {
    throw ConfigError("levels", std::string("no default levels for metric ") + metric_name(cfg.contour_metric));
  }
  const SweepGrid grid = sweep_2d(cfg.x_axis(), cfg.y_axis(), cfg.sweep_fixed(), cfg.workers);
  const auto lines = extract_contours(grid, cfg.contour_metric, levels);
  const auto xp = grid.x_axis.param;
  const auto yp = grid.y_axis.param;
  emit(cfg, std::string("contour_") + metric_name(cfg.contour_metric) + "_" + plane_name(cfg.plane), "contour",
       contours_csv(lines, xp, yp), contours_json(lines, xp, yp), out);
  out << lines.size() << " polylines\n";
  return kExitOk;
}

inline int run_bench(const RunConfig& cfg, std::ostream& out) {
  const auto records = cfg.registry.empty() ? bundled_registry() : load_registry(cfg.registry);
  const BenchmarkReport report = evaluate_registry(records, cfg.env, cfg.thresholds);
  const auto gk = overlay_points(records, Plane::GKappa);
  const auto ggamma = overlay_points(records, Plane::GGamma);
  if (cfg.format == OutputFormat::Json) {
    emit(cfg, "bench", "bench", {}, bench_json(report, gk, ggamma), out);
  } else {
    emit(cfg, "bench", "bench", bench_csv(report), {}, out);
    emit(cfg, "overlay_gk", "overlay", overlay_csv(gk, Plane::GKappa), {}, out);
    emit(cfg, "overlay_ggamma", "overlay", overlay_csv(ggamma, Plane::GGamma), {}, out);
  }
  out << records.size() << " records, " << report.ranking.size() << " ranked, " << report.omitted.size()
      << " unranked\n";
  for (std::size_t i = 0; i < report.ranking.size(); ++i) {
    out << "  " << (i + 1) << ". " << report.ranking[i].name << "  fom = " << format_sig9(report.ranking[i].fom)
        << '\n';
  }
  for (const auto& [name, reason] : report.omitted) out << "  -  " << name << "  (" << reason << ")\n";
  return kExitOk;
}

inline int run_sens(const RunConfig& cfg, std::ostream& out) {
  const auto series = sensitivity_curves(cfg.pairs, cfg.g_axis, cfg.sweep_fixed(), cfg.thresholds);
  emit(cfg, "sensitivity", "sens", sensitivity_csv(series), sensitivity_json(series), out);
  return kExitOk;
}

}  // namespace detail

inline int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cmd) {
      case Command::Eval: return detail::run_eval(cfg, out);
      case Command::Sweep: return detail::run_sweep(cfg, out);
      case Command::Contour: return detail::run_contour(cfg, out);
      case Command::Bench: return detail::run_bench(cfg, out);
      case Command::Sens: return detail::run_sens(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

// One-line help per config key, shown by --help.
inline const char* option_help(const std::string& key) {
  static const std::map<std::string, const char*> help{
      {"alpha", "efficiency weight in (0, 1) [0.5]"},
      {"kappa-ex", "external cavity coupling, Hz [1e6]"},
      {"igp", "imperfection coefficient I_g' [1]"},
      {"delta", "detuning, Hz [2e9]"},
      {"r-much-greater", "ratio meaning 'much greater than' [10]"},
      {"t-approx", "ratio meaning 'approximately equal' [3]"},
      {"g", "coupling rate, Hz [1e6]"},
      {"kappa", "cavity decay rate, Hz [1e6]"},
      {"gamma", "emitter decay rate, Hz [1e6]"},
      {"g-eff", "effective coupling for latency, Hz [g]"},
      {"plane", "gk or ggamma [gk]"},
      {"xmin", "lower g bound, Hz [1e4]"},
      {"xmax", "upper g bound, Hz [1e12]"},
      {"xn", "g samples [200]"},
      {"ymin", "lower kappa or gamma bound, Hz [1e4]"},
      {"ymax", "upper kappa or gamma bound, Hz [1e10]"},
      {"yn", "kappa or gamma samples [200]"},
      {"metric", "cooperativity, efficiency, infidelity, latency or fom [efficiency]"},
      {"levels", "comma-separated contour levels"},
      {"eff-min", "optimal region: minimum efficiency [0.5]"},
      {"inf-max", "optimal region: maximum infidelity [0.5]"},
      {"registry", "technology CSV [bundled table]"},
      {"pairs", "kappa:gamma pairs, comma-separated [1e4:1e4,1e6:1e6,1e8:1e8]"},
      {"gmin", "lower g bound, Hz [1e4]"},
      {"gmax", "upper g bound, Hz [1e12]"},
      {"gn", "g samples [200]"},
      {"outdir", "output directory [.]"},
      {"format", "csv or json [csv]"},
      {"workers", "sweep threads [1]"},
  };
  const auto it = help.find(key);
  return it == help.end() ? "" : it->second;
}

// Parses argv (argv[0] is the program name) and runs the selected command.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                   const std::optional<std::string>& env_outdir = std::nullopt) {
  CLI::App app{"Design-space exploration for cavity-mediated quantum interconnects", "interlink-dse"};
  app.require_subcommand(1);

  const std::vector<std::string> common = {"alpha",          "kappa-ex", "igp",     "delta",
                                           "r-much-greater", "t-approx", "outdir",  "format",
                                           "workers"};
  const std::vector<std::string> point = {"g", "kappa", "gamma", "g-eff"};
  const std::vector<std::string> plane = {"plane", "xmin", "xmax", "xn", "ymin", "ymax", "yn"};

  struct Sub {
    Command cmd;
    CLI::App* app;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
    CLI::Option* plot = nullptr;
  };
  std::map<std::string, std::string> storage;
  std::string config_path;
  bool plot_flag = false;
  std::vector<Sub> subs;

  auto add = [&](Command cmd, const char* name, const char* help, std::vector<std::vector<std::string>> groups) {
    Sub s{cmd, app.add_subcommand(name, help), {}, nullptr};
    s.app->add_option("--config", config_path, "flat key=value config file");
    groups.push_back(common);
    for (const auto& group : groups) {
      for (const auto& key : group) {
        s.opts.emplace_back(key, s.app->add_option("--" + key, storage[key], option_help(key)));
      }
    }
    s.plot = s.app->add_flag("--plot-script", plot_flag, "also write a matplotlib script next to each CSV");
    subs.push_back(std::move(s));
  };
  add(Command::Eval, "eval", "metrics for a single operating point", {point});
  add(Command::Sweep, "sweep", "figure-of-merit grid over the (g, kappa) or (g, gamma) plane",
      {point, plane, {"eff-min", "inf-max"}});
  add(Command::Contour, "contour", "iso-level polylines of one metric", {point, plane, {"metric", "levels"}});
  add(Command::Bench, "bench", "evaluate and rank a technology registry", {{"registry"}});
  add(Command::Sens, "sens", "figure of merit versus g for several (kappa, gamma) pairs",
      {{"pairs", "gmin", "gmax", "gn", "g-eff"}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      ConfigEntries file;
      if (!config_path.empty()) file = read_config_file(config_path);
      ConfigEntries flags;
      for (const auto& [key, opt] : s.opts) {
        if (opt->count() > 0) flags.emplace_back(key, storage[key]);
      }
      if (s.plot->count() > 0) flags.emplace_back("plot-script", "true");
      const RunConfig cfg = parse_config(file, flags, env_outdir);
      return run_command(s.cmd, cfg, out, err);
    } catch (const ConfigError& e) {
      err << "configuration error: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace interlink
