#pragma once

// Design-space exploration over log-spaced (g, kappa, gamma) planes: dense
// sweeps, iso-level contours, optimal-region scans and sensitivity curves.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "interlink/errors.hpp"
#include "interlink/metrics.hpp"
#include "interlink/regimes.hpp"

namespace interlink {

enum class Parameter { G, Kappa, Gamma };

inline const char* parameter_name(Parameter p) noexcept {
  switch (p) {
    case Parameter::G: return "g";
    case Parameter::Kappa: return "kappa";
    case Parameter::Gamma: return "gamma";
  }
  return "?";
}

// Geometrically spaced values from min to max inclusive; both endpoints exact.
inline std::vector<double> log_grid(double min, double max, std::size_t count) {
  if (!(min > 0.0) || !std::isfinite(max) || !(max > min)) {
    throw InvalidParameter("log grid needs 0 < min < max");
  }
  if (count < 2) throw InvalidParameter("log grid needs at least 2 points");
  std::vector<double> out(count);
  const double ratio = max / min;
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = min * std::pow(ratio, static_cast<double>(i) / last);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

struct SweepAxis {
  Parameter param = Parameter::G;
  double min = 1e4;
  double max = 1e12;
  std::size_t count = 200;

  std::vector<double> values() const { return log_grid(min, max, count); }

  bool operator==(const SweepAxis&) const = default;
};

// Everything a sweep holds constant. The rate named by an axis is ignored.
struct SweepFixed {
  EnvironmentDefaults env;
  double g = 1e6;
  double kappa = 1e6;
  double gamma = 1e6;
  std::optional<double> g_eff;  // pinned latency coupling; follows g when unset

  bool operator==(const SweepFixed&) const = default;
};

inline OperatingPoint point_with(const SweepFixed& fixed, Parameter px, double x, Parameter py, double y) {
  OperatingPoint p = make_point(fixed.g, fixed.kappa, fixed.gamma, fixed.env);
  p.g_eff = fixed.g_eff;
  auto assign = [&p](Parameter which, double v) {
    switch (which) {
      case Parameter::G: p.g = v; break;
      case Parameter::Kappa: p.kappa = v; break;
      case Parameter::Gamma: p.gamma = v; break;
    }
  };
  assign(px, x);
  assign(py, y);
  return p;
}

struct GridIndex {
  std::size_t ix = 0;
  std::size_t iy = 0;

  auto operator<=>(const GridIndex&) const = default;
};

// Dense count_x by count_y matrix of metrics, stored x-major: (ix, iy) lives
// at ix * ny + iy.
struct SweepGrid {
  SweepAxis x_axis;
  SweepAxis y_axis;
  SweepFixed fixed;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<MetricSet> values;

  std::size_t nx() const noexcept { return xs.size(); }
  std::size_t ny() const noexcept { return ys.size(); }

  const MetricSet& at(std::size_t ix, std::size_t iy) const { return values.at(ix * ny() + iy); }

  OperatingPoint point_at(std::size_t ix, std::size_t iy) const {
    return point_with(fixed, x_axis.param, xs.at(ix), y_axis.param, ys.at(iy));
  }

  OperatingPoint point_at(double x, double y) const {
    return point_with(fixed, x_axis.param, x, y_axis.param, y);
  }
};

namespace detail {

// Runs body(row) for row in [0, rows) on up to `workers` threads. Each row
// writes only its own slots, so the result does not depend on scheduling.
template <class RowFn>
void parallel_rows(std::size_t rows, std::size_t workers, RowFn&& body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(rows, 1));
  if (workers == 1) {
    for (std::size_t r = 0; r < rows; ++r) body(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next.fetch_add(1); r < rows; r = next.fetch_add(1)) {
          try {
            body(r);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(rows);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

inline SweepGrid sweep_2d(const SweepAxis& x, const SweepAxis& y, const SweepFixed& fixed,
                          std::size_t workers = 1) {
  if (x.param == y.param) {
    throw ConfigError("plane", std::string("both axes sweep ") + parameter_name(x.param));
  }
  fixed.env.validate();
  SweepGrid grid{x, y, fixed, x.values(), y.values(), {}};
  const std::size_t ny = grid.ny();
  grid.values.resize(grid.nx() * ny);
  detail::parallel_rows(grid.nx(), workers, [&](std::size_t ix) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      grid.values[ix * ny + iy] = evaluate_point(grid.point_at(ix, iy), fixed.env.alpha);
    }
  });
  return grid;
}

// ---------------------------------------------------------------------------
// Contours

struct ContourVertex {
  double x = 0.0;  // Hz
  double y = 0.0;  // Hz

  bool operator==(const ContourVertex&) const = default;
};

struct ContourPolyline {
  MetricId metric = MetricId::Efficiency;
  double level = 0.0;
  std::vector<ContourVertex> vertices;
  bool closed = false;  // closed loops repeat their first vertex at the end
};

namespace detail {

struct LogPoint {
  double lx = 0.0;
  double ly = 0.0;

  auto operator<=>(const LogPoint&) const = default;
};

// Marching squares on a rectilinear grid given in log10 coordinates.
// value(ix, iy) returns the node value, center(ix, iy) the value at the middle
// of cell (ix, iy); the latter only decides saddle cells. Nodes with NaN values
// drop the cells that touch them. Returns polylines in log coordinates, each
// oriented and ordered deterministically.
template <class ValueFn, class CenterFn>
std::vector<std::pair<std::vector<LogPoint>, bool>> march_squares(std::span<const double> lx,
                                                                  std::span<const double> ly,
                                                                  ValueFn&& value, double level,
                                                                  CenterFn&& center) {
  const std::size_t nx = lx.size();
  const std::size_t ny = ly.size();
  std::vector<std::pair<std::vector<LogPoint>, bool>> out;
  if (nx < 2 || ny < 2) return out;

  // Edge ids: horizontal (ix,iy)-(ix+1,iy) -> 2*(ix*ny+iy), vertical
  // (ix,iy)-(ix,iy+1) -> 2*(ix*ny+iy)+1.
  auto h_edge = [ny](std::size_t ix, std::size_t iy) -> std::uint64_t { return 2 * (ix * ny + iy); };
  auto v_edge = [ny](std::size_t ix, std::size_t iy) -> std::uint64_t { return 2 * (ix * ny + iy) + 1; };

  std::map<std::uint64_t, LogPoint> edge_point;
  auto crossing = [&](std::uint64_t id) -> LogPoint {
    if (auto it = edge_point.find(id); it != edge_point.end()) return it->second;
    const std::size_t node = id / 2;
    const std::size_t ix = node / ny;
    const std::size_t iy = node % ny;
    const bool horizontal = (id % 2) == 0;
    const std::size_t jx = horizontal ? ix + 1 : ix;
    const std::size_t jy = horizontal ? iy : iy + 1;
    const double va = value(ix, iy);
    const double vb = value(jx, jy);
    const double t = (level - va) / (vb - va);
    LogPoint p{lx[ix] + t * (lx[jx] - lx[ix]), ly[iy] + t * (ly[jy] - ly[iy])};
    edge_point.emplace(id, p);
    return p;
  };

  std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
  for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
      // corners counter-clockwise from bottom-left
      const double v[4] = {value(ix, iy), value(ix + 1, iy), value(ix + 1, iy + 1), value(ix, iy + 1)};
      if (std::any_of(std::begin(v), std::end(v), [](double d) { return std::isnan(d); })) continue;
      bool in[4];
      unsigned mask = 0;
      for (int k = 0; k < 4; ++k) {
        in[k] = v[k] >= level;
        mask |= static_cast<unsigned>(in[k]) << k;
      }
      if (mask == 0 || mask == 15) continue;

      // edges: 0 bottom, 1 right, 2 top, 3 left
      const std::uint64_t e[4] = {h_edge(ix, iy), v_edge(ix + 1, iy), h_edge(ix, iy + 1), v_edge(ix, iy)};
      // the two edges adjacent to each corner
      constexpr int corner_edges[4][2] = {{3, 0}, {0, 1}, {1, 2}, {2, 3}};

      if (mask == 5 || mask == 10) {
        // Saddle: cut off the two corners whose state differs from the centre.
        const bool centre_in = center(ix, iy) >= level;
        for (int k = 0; k < 4; ++k) {
          if (in[k] != centre_in) segments.emplace_back(e[corner_edges[k][0]], e[corner_edges[k][1]]);
        }
        continue;
      }
      std::uint64_t ends[2];
      int found = 0;
      for (int k = 0; k < 4; ++k) {
        const int a = k;
        const int b = (k + 1) % 4;
        if (in[a] != in[b]) ends[found++] = e[k];
      }
      segments.emplace_back(ends[0], ends[1]);
    }
  }
  if (segments.empty()) return out;

  std::map<std::uint64_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);

  auto walk = [&](std::uint64_t start) {
    std::vector<std::uint64_t> chain{start};
    std::uint64_t at = start;
    for (;;) {
      std::optional<std::size_t> step;
      for (std::size_t s : incident[at]) {
        if (!used[s]) {
          step = s;
          break;
        }
      }
      if (!step) break;
      used[*step] = true;
      at = segments[*step].first == at ? segments[*step].second : segments[*step].first;
      chain.push_back(at);
      if (at == start) break;
    }
    return chain;
  };

  auto to_points = [&](const std::vector<std::uint64_t>& chain) {
    std::vector<LogPoint> pts;
    pts.reserve(chain.size());
    for (auto id : chain) pts.push_back(crossing(id));
    return pts;
  };

  // open chains start at edges touched by a single segment
  for (const auto& [id, segs] : incident) {
    if (segs.size() != 1 || used[segs.front()]) continue;
    auto pts = to_points(walk(id));
    if (pts.back() < pts.front()) std::reverse(pts.begin(), pts.end());
    out.emplace_back(std::move(pts), false);
  }
  for (const auto& [id, segs] : incident) {
    if (std::all_of(segs.begin(), segs.end(), [&](std::size_t s) { return used[s]; })) continue;
    auto pts = to_points(walk(id));
    // rotate the loop so it starts (and ends) at its smallest vertex
    pts.pop_back();
    auto smallest = std::min_element(pts.begin(), pts.end());
    std::rotate(pts.begin(), smallest, pts.end());
    pts.push_back(pts.front());
    out.emplace_back(std::move(pts), true);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.front(), a.first.back()) < std::tie(b.first.front(), b.first.back());
  });
  return out;
}

inline std::vector<double> log10_all(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double d) { return std::log10(d); });
  return out;
}

inline std::vector<double> normalized_levels(std::vector<double> levels) {
  for (double l : levels) {
    if (!std::isfinite(l)) throw InvalidParameter("contour levels must be finite");
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

}  // namespace detail

// Iso-lines of an arbitrary field sampled on log-spaced axes. values is
// x-major (ix * ys.size() + iy). Saddle cells use the mean of the four
// corners.
inline std::vector<ContourPolyline> contour_field(std::span<const double> xs, std::span<const double> ys,
                                                  std::span<const double> values, MetricId metric,
                                                  std::vector<double> levels) {
  if (values.size() != xs.size() * ys.size()) throw InvalidParameter("field size does not match axes");
  const auto lx = detail::log10_all(xs);
  const auto ly = detail::log10_all(ys);
  const std::size_t ny = ys.size();
  auto value = [&](std::size_t ix, std::size_t iy) { return values[ix * ny + iy]; };
  auto center = [&](std::size_t ix, std::size_t iy) {
    return 0.25 * (value(ix, iy) + value(ix + 1, iy) + value(ix, iy + 1) + value(ix + 1, iy + 1));
  };
  std::vector<ContourPolyline> out;
  for (double level : detail::normalized_levels(std::move(levels))) {
    for (auto& [pts, closed] : detail::march_squares(lx, ly, value, level, center)) {
      ContourPolyline line{metric, level, {}, closed};
      line.vertices.reserve(pts.size());
      for (const auto& p : pts) line.vertices.push_back({std::pow(10.0, p.lx), std::pow(10.0, p.ly)});
      out.push_back(std::move(line));
    }
  }
  return out;
}

// Iso-lines of one metric over a sweep, interpolated linearly along cell edges
// in (log10 x, log10 y). Saddle cells are resolved by evaluating the model at
// the geometric centre of the cell.
inline std::vector<ContourPolyline> extract_contours(const SweepGrid& grid, MetricId metric,
                                                     std::vector<double> levels) {
  const auto lx = detail::log10_all(grid.xs);
  const auto ly = detail::log10_all(grid.ys);
  auto value = [&](std::size_t ix, std::size_t iy) { return metric_value(grid.at(ix, iy), metric); };
  auto center = [&](std::size_t ix, std::size_t iy) {
    const double cx = std::sqrt(grid.xs[ix] * grid.xs[ix + 1]);
    const double cy = std::sqrt(grid.ys[iy] * grid.ys[iy + 1]);
    return metric_value(evaluate_point(grid.point_at(cx, cy), grid.fixed.env.alpha), metric);
  };
  std::vector<ContourPolyline> out;
  for (double level : detail::normalized_levels(std::move(levels))) {
    for (auto& [pts, closed] : detail::march_squares(lx, ly, value, level, center)) {
      ContourPolyline line{metric, level, {}, closed};
      line.vertices.reserve(pts.size());
      for (const auto& p : pts) line.vertices.push_back({std::pow(10.0, p.lx), std::pow(10.0, p.ly)});
      out.push_back(std::move(line));
    }
  }
  return out;
}

// Bilinear interpolation of a metric in (log10 x, log10 y). Points outside the
// grid are clamped to the boundary cell.
inline double sample_log_bilinear(const SweepGrid& grid, MetricId metric, double x, double y) {
  auto locate = [](const std::vector<double>& axis, double v) {
    const double lv = std::log10(v);
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - axis.begin(), 1,
                                                                        static_cast<std::ptrdiff_t>(axis.size() - 1)));
    const std::size_t lo = hi - 1;
    const double la = std::log10(axis[lo]);
    const double lb = std::log10(axis[hi]);
    return std::pair{lo, (lv - la) / (lb - la)};
  };
  const auto [ix, tx] = locate(grid.xs, x);
  const auto [iy, ty] = locate(grid.ys, y);
  auto v = [&](std::size_t i, std::size_t j) { return metric_value(grid.at(i, j), metric); };
  return (1 - tx) * (1 - ty) * v(ix, iy) + tx * (1 - ty) * v(ix + 1, iy) + (1 - tx) * ty * v(ix, iy + 1) +
         tx * ty * v(ix + 1, iy + 1);
}

// ---------------------------------------------------------------------------
// Optimal region

struct OptimalRegion {
  std::vector<GridIndex> nodes;  // efficiency >= eff_min and infidelity <= inf_max, x-major order
  std::optional<GridIndex> best;  // node of maximum figure of merit
  double best_fom = 0.0;
};

inline OptimalRegion find_optimal_region(const SweepGrid& grid, double eff_min, double inf_max) {
  if (!std::isfinite(eff_min) || !std::isfinite(inf_max)) {
    throw InvalidParameter("optimal-region thresholds must be finite");
  }
  OptimalRegion region;
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
      const MetricSet& m = grid.at(ix, iy);
      if (m.efficiency >= eff_min && m.infidelity <= inf_max) region.nodes.push_back({ix, iy});
      if (!std::isnan(m.fom) && (!region.best || m.fom > region.best_fom)) {
        region.best = GridIndex{ix, iy};
        region.best_fom = m.fom;
      }
    }
  }
  return region;
}

// ---------------------------------------------------------------------------
// Sensitivity

namespace detail {

// d ln y / d ln x with central differences inside runs of positive y and
// one-sided differences at run ends. Entries with y <= 0, or isolated
// positive entries, stay empty.
inline std::vector<std::optional<double>> masked_loglog_slope(std::span<const double> xs,
                                                              std::span<const double> ys) {
  const std::size_t n = xs.size();
  std::vector<std::optional<double>> out(n);
  auto ok = [&](std::size_t i) { return ys[i] > 0.0; };
  auto slope = [&](std::size_t a, std::size_t b) {
    return (std::log(ys[b]) - std::log(ys[a])) / (std::log(xs[b]) - std::log(xs[a]));
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!ok(i)) continue;
    const bool left = i > 0 && ok(i - 1);
    const bool right = i + 1 < n && ok(i + 1);
    if (left && right) {
      out[i] = slope(i - 1, i + 1);
    } else if (right) {
      out[i] = slope(i, i + 1);
    } else if (left) {
      out[i] = slope(i - 1, i);
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<double> loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidParameter("loglog_slope needs two equal-length series of at least 2 points");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || (i > 0 && !(xs[i] > xs[i - 1]))) {
      throw InvalidParameter("loglog_slope needs strictly ascending positive x");
    }
    if (!(ys[i] > 0.0)) throw InvalidParameter("loglog_slope needs positive y");
  }
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& s : detail::masked_loglog_slope(xs, ys)) out.push_back(*s);
  return out;
}

struct SensitivitySeries {
  double kappa = 0.0;
  double gamma = 0.0;
  std::vector<double> g_values;
  std::vector<double> fom_values;
  double strong_threshold_g = 0.0;  // R * max(kappa, gamma)
  std::vector<std::optional<double>> loglog_slopes;  // empty where fom <= 0
};

struct DecayPair {
  double kappa = 0.0;
  double gamma = 0.0;

  bool operator==(const DecayPair&) const = default;
};

inline std::vector<SensitivitySeries> sensitivity_curves(std::span<const DecayPair> pairs, const SweepAxis& g_axis,
                                                         const SweepFixed& fixed,
                                                         const RegimeThresholds& th = {}) {
  if (g_axis.param != Parameter::G) throw ConfigError("g_axis", "sensitivity axis must sweep g");
  fixed.env.validate();
  th.validate();
  const auto gs = g_axis.values();
  std::vector<SensitivitySeries> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    detail::require_positive(pair.kappa, "kappa");
    detail::require_positive(pair.gamma, "gamma");
    SensitivitySeries s{pair.kappa, pair.gamma, gs, {}, th.r_much_greater * std::max(pair.kappa, pair.gamma), {}};
    s.fom_values.reserve(gs.size());
    for (double g : gs) {
      OperatingPoint p = make_point(g, pair.kappa, pair.gamma, fixed.env);
      p.g_eff = fixed.g_eff;
      s.fom_values.push_back(figure_of_merit(p, fixed.env.alpha));
    }
    s.loglog_slopes = detail::masked_loglog_slope(s.g_values, s.fom_values);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace interlink
