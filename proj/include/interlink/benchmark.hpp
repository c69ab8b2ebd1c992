#pragma once

// Technology registry (CSV), batch evaluation, ranking and overlay points.
//
// Registry format, UTF-8:
//   name,qubit_type,reference,g_hz,kappa_hz,gamma_hz
// one row per technology; gamma_hz may be empty. Fields may be double-quoted.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "interlink/errors.hpp"
#include "interlink/metrics.hpp"
#include "interlink/regimes.hpp"

namespace interlink {

enum class QubitType { Superconducting, NeutralAtom, TrappedIon, Semiconducting };

inline const char* qubit_type_name(QubitType t) noexcept {
  switch (t) {
    case QubitType::Superconducting: return "superconducting";
    case QubitType::NeutralAtom: return "neutral_atom";
    case QubitType::TrappedIon: return "trapped_ion";
    case QubitType::Semiconducting: return "semiconducting";
  }
  return "?";
}

inline std::optional<QubitType> parse_qubit_type(std::string_view s) noexcept {
  for (auto t : {QubitType::Superconducting, QubitType::NeutralAtom, QubitType::TrappedIon,
                 QubitType::Semiconducting}) {
    if (s == qubit_type_name(t)) return t;
  }
  return std::nullopt;
}

struct TechnologyRecord {
  std::string name;
  QubitType qubit_type = QubitType::Superconducting;
  std::string reference;
  double g = 0.0;      // Hz
  double kappa = 0.0;  // Hz
  std::optional<double> gamma;  // Hz, absent when the source does not list it

  bool operator==(const TechnologyRecord&) const = default;
};

inline constexpr std::string_view kRegistryHeader = "name,qubit_type,reference,g_hz,kappa_hz,gamma_hz";

// Selected cavity-QED state-transfer experiments. The superconducting entry
// has no published qubit decay rate.
inline constexpr std::string_view kBundledRegistryCsv =
    "name,qubit_type,reference,g_hz,kappa_hz,gamma_hz\n"
    "Magnard,superconducting,b16,307e6,8.6e6,\n"
    "Ramette (neutral atom),neutral_atom,b17,5.8e6,0.34e6,6e6\n"
    "Young,neutral_atom,b18,98e6,253e6,6e6\n"
    "Liu,neutral_atom,b19,3.2e6,1e6,2.6e6\n"
    "Ramette (trapped ion),trapped_ion,b17,2.8e6,5.3e4,25e6\n"
    "Sipahigil and Evans,semiconducting,b20,2.1e9,57e9,0.3e9\n"
    "Bonizzoni,semiconducting,b21,21e6,10e6,30e6\n"
    "Schuster,semiconducting,b22,38e6,1.3e6,96e6\n"
    "Evans,semiconducting,b23,7.3e9,48e9,0.19e9\n";

namespace detail {

// Splits one CSV line. Quoted fields may contain commas and doubled quotes.
inline std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty() || was_quoted) return std::nullopt;
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) return std::nullopt;
      cur += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Shortest text that parses back to exactly v.
inline std::string format_roundtrip(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline std::vector<TechnologyRecord> parse_registry(std::string_view text, std::string_view source = "registry") {
  std::vector<TechnologyRecord> records;
  std::set<std::string, std::less<>> names;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  auto fail = [&](std::size_t line_no, const std::string& msg) -> DataError {
    return DataError(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
  };

  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != kRegistryHeader) {
        throw fail(line_no, "expected header '" + std::string(kRegistryHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    auto fields = detail::split_csv_line(line);
    if (!fields) throw fail(line_no, "malformed quoting");
    if (fields->size() != 6) {
      throw fail(line_no, "expected 6 fields, found " + std::to_string(fields->size()));
    }
    auto& f = *fields;
    TechnologyRecord r;
    r.name = std::string(detail::trim(f[0]));
    if (r.name.empty()) throw fail(line_no, "empty name");
    auto type = parse_qubit_type(detail::trim(f[1]));
    if (!type) throw fail(line_no, "unknown qubit_type '" + f[1] + "'");
    r.qubit_type = *type;
    r.reference = std::string(detail::trim(f[2]));

    auto rate = [&](const std::string& field, const char* column) {
      auto v = detail::parse_double(field);
      if (!v) throw fail(line_no, std::string(column) + " is not a number: '" + field + "'");
      if (!(*v > 0.0) || !std::isfinite(*v)) throw fail(line_no, std::string(column) + " must be positive");
      return *v;
    };
    r.g = rate(f[3], "g_hz");
    r.kappa = rate(f[4], "kappa_hz");
    if (!detail::trim(f[5]).empty()) r.gamma = rate(f[5], "gamma_hz");

    if (!names.insert(r.name).second) throw fail(line_no, "duplicate name '" + r.name + "'");
    records.push_back(std::move(r));
  }
  return records;
}

inline std::vector<TechnologyRecord> load_registry(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open registry '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_registry(ss.str(), path);
}

inline std::vector<TechnologyRecord> bundled_registry() { return parse_registry(kBundledRegistryCsv, "bundled"); }

inline std::string serialize_registry(const std::vector<TechnologyRecord>& records) {
  std::string out(kRegistryHeader);
  out += '\n';
  for (const auto& r : records) {
    out += detail::csv_escape(r.name) + ',' + qubit_type_name(r.qubit_type) + ',' + detail::csv_escape(r.reference) +
           ',' + detail::format_roundtrip(r.g) + ',' + detail::format_roundtrip(r.kappa) + ',' +
           (r.gamma ? detail::format_roundtrip(*r.gamma) : std::string()) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

inline constexpr std::string_view kGammaMissing = "gamma-missing";

struct BenchmarkEntry {
  TechnologyRecord record;
  std::optional<OperatingPoint> point;  // only when gamma is known
  std::optional<MetricSet> metrics;
  std::optional<RegimeLabel> regime;
  std::optional<double> margin;
  std::string omitted_reason;  // empty when ranked
};

struct RankedTechnology {
  std::string name;
  double fom = 0.0;

  bool operator==(const RankedTechnology&) const = default;
};

struct BenchmarkReport {
  EnvironmentDefaults env;
  RegimeThresholds thresholds;
  std::vector<BenchmarkEntry> entries;  // registry order
  std::vector<RankedTechnology> ranking;  // fom descending, ties by name
  std::vector<std::pair<std::string, std::string>> omitted;  // (name, reason)
};

inline std::vector<RankedTechnology> rank_technologies(const BenchmarkReport& report) {
  std::vector<RankedTechnology> ranked;
  for (const auto& e : report.entries) {
    if (e.metrics && !std::isnan(e.metrics->fom)) ranked.push_back({e.record.name, e.metrics->fom});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedTechnology& a, const RankedTechnology& b) {
    if (a.fom != b.fom) return a.fom > b.fom;
    return a.name < b.name;
  });
  return ranked;
}

// Applies the registry-wide environment to every record. Records without a
// qubit decay rate are kept for (g, kappa) placement only and never receive a
// substitute gamma.
inline BenchmarkReport evaluate_registry(const std::vector<TechnologyRecord>& records,
                                         const EnvironmentDefaults& env = {},
                                         const RegimeThresholds& th = {}) {
  env.validate();
  th.validate();
  BenchmarkReport report{env, th, {}, {}, {}};
  report.entries.reserve(records.size());
  for (const auto& r : records) {
    BenchmarkEntry e{r, {}, {}, {}, {}, {}};
    if (r.gamma) {
      e.point = make_point(r.g, r.kappa, *r.gamma, env);
      e.metrics = evaluate_point(*e.point, env.alpha);
      e.regime = classify_regime(r.g, r.kappa, *r.gamma, th);
      e.margin = coupling_margin(r.g, r.kappa, *r.gamma);
    } else {
      e.omitted_reason = std::string(kGammaMissing);
      report.omitted.emplace_back(r.name, e.omitted_reason);
    }
    report.entries.push_back(std::move(e));
  }
  report.ranking = rank_technologies(report);
  return report;
}

enum class Plane { GKappa, GGamma };

inline const char* plane_name(Plane p) noexcept { return p == Plane::GKappa ? "gk" : "ggamma"; }

struct OverlayPoint {
  std::string name;
  QubitType qubit_type = QubitType::Superconducting;
  double x = 0.0;  // g, Hz
  double y = 0.0;  // kappa or gamma, Hz

  bool operator==(const OverlayPoint&) const = default;
};

inline std::vector<OverlayPoint> overlay_points(const std::vector<TechnologyRecord>& records, Plane plane) {
  std::vector<OverlayPoint> out;
  for (const auto& r : records) {
    if (plane == Plane::GKappa) {
      out.push_back({r.name, r.qubit_type, r.g, r.kappa});
    } else if (r.gamma) {
      out.push_back({r.name, r.qubit_type, r.g, *r.gamma});
    }
  }
  return out;
}

}  // namespace interlink
