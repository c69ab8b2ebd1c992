#pragma once

// Run configuration: defaults, then a flat key=value file, then the output
// directory environment variable, then command-line flags.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "interlink/benchmark.hpp"
#include "interlink/dse.hpp"
#include "interlink/errors.hpp"
#include "interlink/metrics.hpp"
#include "interlink/regimes.hpp"

namespace interlink {

inline constexpr const char* kOutdirEnvVar = "INTERLINK_DSE_OUTDIR";

enum class OutputFormat { Csv, Json };

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  EnvironmentDefaults env;
  RegimeThresholds thresholds;

  // single point; also the held-constant rate of a sweep plane
  double g = 1e6;
  double kappa = 1e6;
  double gamma = 1e6;
  std::optional<double> g_eff;

  Plane plane = Plane::GKappa;
  std::optional<double> xmin, xmax, ymin, ymax;
  std::optional<std::size_t> xn, yn;

  MetricId contour_metric = MetricId::Efficiency;
  std::vector<double> levels;  // empty: per-metric default

  double eff_min = 0.5;
  double inf_max = 0.5;

  std::string registry;  // empty: bundled table

  std::vector<DecayPair> pairs{{1e4, 1e4}, {1e6, 1e6}, {1e8, 1e8}};
  SweepAxis g_axis{Parameter::G, 1e4, 1e12, 200};

  std::string outdir = ".";
  OutputFormat format = OutputFormat::Csv;
  std::size_t workers = 1;
  bool plot_script = false;

  // Default grids cover g in [1e4, 1e12] and kappa, gamma in [1e4, 1e10], 200
  // nodes per axis.
  SweepAxis x_axis() const { return {Parameter::G, xmin.value_or(1e4), xmax.value_or(1e12), xn.value_or(200)}; }

  SweepAxis y_axis() const {
    return {plane == Plane::GKappa ? Parameter::Kappa : Parameter::Gamma, ymin.value_or(1e4), ymax.value_or(1e10),
            yn.value_or(200)};
  }

  SweepFixed sweep_fixed() const { return SweepFixed{env, g, kappa, gamma, g_eff}; }

  OperatingPoint point() const {
    OperatingPoint p = make_point(g, kappa, gamma, env);
    p.g_eff = g_eff;
    return p;
  }

  std::vector<double> contour_levels() const {
    if (!levels.empty()) return levels;
    switch (contour_metric) {
      case MetricId::Efficiency: return {0.5, 0.7, 0.8};
      case MetricId::Infidelity: return {0.2, 0.3, 0.5};
      case MetricId::Cooperativity: return {1.0};
      default: return {};
    }
  }
};

namespace detail {

inline double config_number(const std::string& key, std::string_view text) {
  auto v = parse_double(text);
  if (!v || !std::isfinite(*v)) throw ConfigError(key, "not a finite number: '" + std::string(text) + "'");
  return *v;
}

inline std::size_t config_count(const std::string& key, std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    // accept integral floating spellings such as 2e2
    const double d = config_number(key, text);
    if (d < 0 || d != std::floor(d) || d > 1e9) throw ConfigError(key, "not a non-negative integer: '" + std::string(text) + "'");
    return static_cast<std::size_t>(d);
  }
  return v;
}

inline bool config_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw ConfigError(key, "not a boolean: '" + std::string(text) + "'");
}

inline std::vector<double> config_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    out.push_back(config_number(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

// "k1:g1,k2:g2,..."
inline std::vector<DecayPair> config_pairs(const std::string& key, std::string_view text) {
  std::vector<DecayPair> out;
  while (!trim(text).empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ConfigError(key, "expected kappa:gamma, got '" + std::string(item) + "'");
    const double k = config_number(key, item.substr(0, colon));
    const double gm = config_number(key, item.substr(colon + 1));
    if (!(k > 0) || !(gm > 0)) throw ConfigError(key, "decay rates must be positive");
    out.push_back({k, gm});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(key, "empty pair list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

inline const std::map<std::string, Setter, std::less<>>& config_setters() {
  static const std::map<std::string, Setter, std::less<>> setters = [] {
    std::map<std::string, Setter, std::less<>> m;
    auto num = [](double RunConfig::*field) {
      return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = config_number(k, v); };
    };
    auto opt_num = [](std::optional<double> RunConfig::*field) {
      return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = config_number(k, v); };
    };
    auto opt_count = [](std::optional<std::size_t> RunConfig::*field) {
      return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = config_count(k, v); };
    };
    m["alpha"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.env.alpha = config_number(k, v); };
    m["kappa-ex"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.env.kappa_ex = config_number(k, v);
    };
    m["igp"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.env.i_g_prime = config_number(k, v); };
    m["delta"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.env.delta = config_number(k, v); };
    m["r-much-greater"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.thresholds.r_much_greater = config_number(k, v);
    };
    m["t-approx"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.thresholds.t_approx = config_number(k, v);
    };
    m["g"] = num(&RunConfig::g);
    m["kappa"] = num(&RunConfig::kappa);
    m["gamma"] = num(&RunConfig::gamma);
    m["g-eff"] = opt_num(&RunConfig::g_eff);
    m["plane"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      const auto t = trim(v);
      if (t == "gk") {
        c.plane = Plane::GKappa;
      } else if (t == "ggamma") {
        c.plane = Plane::GGamma;
      } else {
        throw ConfigError(k, "expected gk or ggamma, got '" + v + "'");
      }
    };
    m["xmin"] = opt_num(&RunConfig::xmin);
    m["xmax"] = opt_num(&RunConfig::xmax);
    m["ymin"] = opt_num(&RunConfig::ymin);
    m["ymax"] = opt_num(&RunConfig::ymax);
    m["xn"] = opt_count(&RunConfig::xn);
    m["yn"] = opt_count(&RunConfig::yn);
    m["metric"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      auto id = parse_metric(trim(v));
      if (!id) throw ConfigError(k, "unknown metric '" + v + "'");
      c.contour_metric = *id;
    };
    m["levels"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.levels = config_list(k, v); };
    m["eff-min"] = num(&RunConfig::eff_min);
    m["inf-max"] = num(&RunConfig::inf_max);
    m["registry"] = [](RunConfig& c, const std::string&, const std::string& v) { c.registry = std::string(trim(v)); };
    m["pairs"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.pairs = config_pairs(k, v); };
    m["gmin"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.g_axis.min = config_number(k, v); };
    m["gmax"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.g_axis.max = config_number(k, v); };
    m["gn"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.g_axis.count = config_count(k, v); };
    m["outdir"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      if (trim(v).empty()) throw ConfigError(k, "empty output directory");
      c.outdir = std::string(trim(v));
    };
    m["format"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      const auto t = trim(v);
      if (t == "csv") {
        c.format = OutputFormat::Csv;
      } else if (t == "json") {
        c.format = OutputFormat::Json;
      } else {
        throw ConfigError(k, "expected csv or json, got '" + v + "'");
      }
    };
    m["workers"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.workers = config_count(k, v);
      if (c.workers == 0) throw ConfigError(k, "need at least one worker");
    };
    m["plot-script"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.plot_script = config_bool(k, v);
    };
    return m;
  }();
  return setters;
}

inline void check_axis(const char* min_key, const char* n_key, double min, double max, std::size_t n) {
  if (!(min > 0.0) || !(max > min)) {
    throw ConfigError(min_key, "axis needs 0 < min < max, got [" + std::to_string(min) + ", " + std::to_string(max) + "]");
  }
  if (n < 2) throw ConfigError(n_key, "axis needs at least 2 points, got " + std::to_string(n));
}

}  // namespace detail

// Keys accepted in config files and as --flags.
inline std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : detail::config_setters()) keys.push_back(k);
  return keys;
}

// Parses flat key=value text. '#' starts a comment; blank lines are skipped.
inline ConfigEntries parse_config_text(std::string_view text) {
  ConfigEntries out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "config line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1))));
  }
  return out;
}

inline ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

// Precedence: flags > env_outdir (outdir only) > file > defaults. Unknown keys
// and values outside their domain raise ConfigError naming the key.
inline RunConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags,
                              const std::optional<std::string>& env_outdir = std::nullopt) {
  RunConfig cfg;
  const auto& setters = detail::config_setters();
  auto apply = [&](const ConfigEntries& entries) {
    for (const auto& [key, value] : entries) {
      auto it = setters.find(key);
      if (it == setters.end()) throw ConfigError(key, "unknown key");
      it->second(cfg, key, value);
    }
  };
  apply(file);
  if (env_outdir && !env_outdir->empty()) cfg.outdir = *env_outdir;
  apply(flags);

  if (!(cfg.env.alpha > 0.0 && cfg.env.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  if (!(cfg.env.kappa_ex > 0.0)) throw ConfigError("kappa-ex", "must be positive");
  if (!(cfg.env.i_g_prime >= 0.0)) throw ConfigError("igp", "must be non-negative");
  if (!(cfg.env.delta >= 0.0)) throw ConfigError("delta", "must be non-negative");
  if (!(cfg.thresholds.r_much_greater > 1.0)) throw ConfigError("r-much-greater", "must be > 1");
  if (!(cfg.thresholds.t_approx >= 1.0)) throw ConfigError("t-approx", "must be >= 1");
  if (!(cfg.g > 0.0)) throw ConfigError("g", "must be positive");
  if (!(cfg.kappa > 0.0)) throw ConfigError("kappa", "must be positive");
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma", "must be positive");
  if (cfg.g_eff && !(*cfg.g_eff > 0.0)) throw ConfigError("g-eff", "must be positive");

  const auto x = cfg.x_axis();
  const auto y = cfg.y_axis();
  detail::check_axis("xmin", "xn", x.min, x.max, x.count);
  detail::check_axis("ymin", "yn", y.min, y.max, y.count);
  detail::check_axis("gmin", "gn", cfg.g_axis.min, cfg.g_axis.max, cfg.g_axis.count);
  return cfg;
}

}  // namespace interlink
