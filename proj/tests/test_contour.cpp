#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

#include "interlink/dse.hpp"
#include "oracles.hpp"

using namespace interlink;

namespace {

struct Seg {
  double ax, ay, bx, by;
};

bool segments_cross(const Seg& s, const Seg& t) {
  auto orient = [](double px, double py, double qx, double qy, double rx, double ry) {
    const double v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    return (v > 0) - (v < 0);
  };
  const int o1 = orient(s.ax, s.ay, s.bx, s.by, t.ax, t.ay);
  const int o2 = orient(s.ax, s.ay, s.bx, s.by, t.bx, t.by);
  const int o3 = orient(t.ax, t.ay, t.bx, t.by, s.ax, s.ay);
  const int o4 = orient(t.ax, t.ay, t.bx, t.by, s.bx, s.by);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

std::vector<Seg> log_segments(const std::vector<ContourPolyline>& lines, double level) {
  std::vector<Seg> out;
  for (const auto& l : lines) {
    if (l.level != level) continue;
    for (std::size_t i = 1; i < l.vertices.size(); ++i) {
      out.push_back({std::log10(l.vertices[i - 1].x), std::log10(l.vertices[i - 1].y), std::log10(l.vertices[i].x),
                     std::log10(l.vertices[i].y)});
    }
  }
  return out;
}

// log10(y) of the contour at log10(x) = lx, if some segment spans it.
std::optional<double> contour_height(const std::vector<Seg>& segs, double lx) {
  for (const auto& s : segs) {
    const double lo = std::min(s.ax, s.bx), hi = std::max(s.ax, s.bx);
    if (lx < lo || lx > hi || hi == lo) continue;
    return s.ay + (lx - s.ax) / (s.bx - s.ax) * (s.by - s.ay);
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("cooperativity = 1 contour follows kappa = g^2/gamma", "[contour]") {
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 200}, {Parameter::Kappa, 1e4, 1e10, 200}, {});
  const auto lines = extract_contours(grid, MetricId::Cooperativity, {1.0});
  REQUIRE(lines.size() == 1);
  const double cell_x = std::log10(grid.xs[1] / grid.xs[0]);
  const double cell_y = std::log10(grid.ys[1] / grid.ys[0]);
  const double diagonal = std::hypot(cell_x, cell_y);

  bool passes_baseline = false;
  for (const auto& v : lines.front().vertices) {
    // analytic curve in log space: log kappa = 2 log g - log gamma. Each vertex
    // sits on a cell edge, so the exact crossing lies on the same edge: within
    // one cell horizontally or within one cell vertically.
    const double lx = std::log10(v.x), ly = std::log10(v.y);
    const double dx = std::abs(lx - (ly + 6.0) / 2.0) / cell_x;
    const double dy = std::abs(ly - (2 * lx - 6.0)) / cell_y;
    CHECK(std::min(dx, dy) < 1.0);
    const double lc = std::log10(static_cast<double>(oracle::cooperativity(v.x, v.y, 1e6)));
    CHECK(std::abs(lc) <= 2 * std::max(cell_x, cell_y));
    if (std::hypot(std::log10(v.x) - 6.0, std::log10(v.y) - 6.0) <= diagonal) passes_baseline = true;
  }
  CHECK(passes_baseline);
}

TEST_CASE("vertices reproduce the level under log-bilinear interpolation", "[contour][property]") {
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 80}, {Parameter::Kappa, 1e4, 1e10, 70}, {});
  for (auto metric : {MetricId::Efficiency, MetricId::Infidelity, MetricId::Cooperativity}) {
    const std::vector<double> levels = metric == MetricId::Infidelity ? std::vector<double>{0.2, 0.3, 0.5}
                                       : metric == MetricId::Efficiency ? std::vector<double>{0.5, 0.7, 0.8}
                                                                        : std::vector<double>{0.1, 1.0, 10.0};
    const auto lines = extract_contours(grid, metric, levels);
    CHECK_FALSE(lines.empty());
    for (const auto& l : lines) {
      for (const auto& v : l.vertices) {
        CHECK(v.x >= grid.xs.front() * (1 - 1e-12));
        CHECK(v.x <= grid.xs.back() * (1 + 1e-12));
        CHECK(v.y >= grid.ys.front() * (1 - 1e-12));
        CHECK(v.y <= grid.ys.back() * (1 + 1e-12));
        CHECK(std::abs(sample_log_bilinear(grid, metric, v.x, v.y) - l.level) <= 1e-9 * std::abs(l.level));
      }
    }
  }
}

TEST_CASE("consecutive vertices lie in adjacent cells", "[contour]") {
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 50}, {Parameter::Kappa, 1e4, 1e10, 50}, {});
  const double cx = std::log10(grid.xs[1] / grid.xs[0]);
  const double cy = std::log10(grid.ys[1] / grid.ys[0]);
  for (const auto& l : extract_contours(grid, MetricId::Efficiency, {0.5, 0.7, 0.8})) {
    REQUIRE(l.vertices.size() >= 2);
    for (std::size_t i = 1; i < l.vertices.size(); ++i) {
      CHECK(std::abs(std::log10(l.vertices[i].x / l.vertices[i - 1].x)) <= cx * (1 + 1e-9));
      CHECK(std::abs(std::log10(l.vertices[i].y / l.vertices[i - 1].y)) <= cy * (1 + 1e-9));
    }
  }
}

TEST_CASE("efficiency contours are nested and never cross", "[contour]") {
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 200}, {Parameter::Kappa, 1e4, 1e10, 200}, {});
  const auto lines = extract_contours(grid, MetricId::Efficiency, {0.8, 0.5, 0.7});
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].level == 0.5);
  CHECK(lines[1].level == 0.7);
  CHECK(lines[2].level == 0.8);

  const auto s5 = log_segments(lines, 0.5), s7 = log_segments(lines, 0.7), s8 = log_segments(lines, 0.8);
  for (const auto* pair : {&s7, &s8}) {
    for (const auto& a : s5) {
      for (const auto& b : *pair) CHECK_FALSE(segments_cross(a, b));
    }
  }
  for (const auto& a : s7) {
    for (const auto& b : s8) CHECK_FALSE(segments_cross(a, b));
  }

  int compared = 0;
  for (double lx = 4.0; lx <= 12.0; lx += 0.05) {
    const auto h5 = contour_height(s5, lx), h7 = contour_height(s7, lx), h8 = contour_height(s8, lx);
    if (h5 && h7) CHECK(*h7 < *h5);
    if (h7 && h8) CHECK(*h8 < *h7);
    if (h5 && h7 && h8) ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("levels outside the data produce nothing", "[contour]") {
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e8, 10}, {Parameter::Kappa, 1e4, 1e8, 10}, {});
  double top = -INFINITY;
  for (const auto& m : grid.values) top = std::max(top, m.infidelity);
  CHECK(extract_contours(grid, MetricId::Infidelity, {top * 2}).empty());
  CHECK_THROWS_AS(extract_contours(grid, MetricId::Infidelity, {NAN}), InvalidParameter);
}

TEST_CASE("ordering is by level then starting vertex", "[contour]") {
  // two separate bumps give two closed loops per level
  const auto xs = log_grid(1, 1e4, 41), ys = log_grid(1, 1e4, 41);
  std::vector<double> v(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double lx = std::log10(xs[i]), ly = std::log10(ys[j]);
      v[i * ys.size() + j] = std::exp(-8 * (std::pow(lx - 1, 2) + std::pow(ly - 1, 2))) +
                             std::exp(-8 * (std::pow(lx - 3, 2) + std::pow(ly - 3, 2)));
    }
  }
  const auto lines = contour_field(xs, ys, v, MetricId::Fom, {0.5, 0.25});
  REQUIRE(lines.size() == 4);
  for (const auto& l : lines) {
    CHECK(l.closed);
    CHECK(l.vertices.front() == l.vertices.back());
  }
  CHECK(lines[0].level == 0.25);
  CHECK(lines[2].level == 0.5);
  CHECK(lines[0].vertices.front().x < lines[1].vertices.front().x);
  CHECK(lines[2].vertices.front().x < lines[3].vertices.front().x);
  CHECK(contour_field(xs, ys, v, MetricId::Fom, {0.25, 0.5}).size() == 4);
}

TEST_CASE("saddle cells follow the centre value", "[contour]") {
  const std::vector<double> xs{1, 10}, ys{1, 10};
  const double mid = std::pow(10.0, 0.5);

  // x-major corners: (0,0)=1 (0,1)=0 (1,0)=0 (1,1)=1; corner mean 0.5 counts
  // as inside, so the low corners (0,1) and (1,0) are cut off
  auto lines = contour_field(xs, ys, std::vector<double>{1, 0, 0, 1}, MetricId::Fom, {0.5});
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].vertices == std::vector<ContourVertex>{{1, mid}, {mid, 10}});
  CHECK(lines[1].vertices == std::vector<ContourVertex>{{mid, 1}, {10, mid}});

  // corner mean 0.375 is outside: the high corners (0,0) and (1,1) are cut off
  lines = contour_field(xs, ys, std::vector<double>{0.9, 0, 0, 0.6}, MetricId::Fom, {0.5});
  REQUIRE(lines.size() == 2);
  for (const auto& v : lines[0].vertices) CHECK((v.x < mid && v.y < mid));
  for (const auto& v : lines[1].vertices) CHECK((v.x > mid && v.y > mid));
}

TEST_CASE("grid saddle resolution evaluates the model at the cell centre", "[contour]") {
  // The cooperativity field has no saddles; this checks the path runs and agrees
  // with the corner-mean resolver where the two cannot differ.
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 30}, {Parameter::Kappa, 1e4, 1e10, 30}, {});
  std::vector<double> field;
  for (const auto& m : grid.values) field.push_back(m.cooperativity);
  const auto a = extract_contours(grid, MetricId::Cooperativity, {1.0, 100.0});
  const auto b = contour_field(grid.xs, grid.ys, field, MetricId::Cooperativity, {1.0, 100.0});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].vertices == b[i].vertices);
}
