// Prints the kappa ceiling of each efficiency level at a few coupling strengths,
// read off the extracted contours of a (g, kappa) sweep.

#include <cmath>
#include <cstdio>

#include "interlink/dse.hpp"

int main() {
  using namespace interlink;
  const auto grid = sweep_2d({Parameter::G, 1e4, 1e12, 200}, {Parameter::Kappa, 1e4, 1e10, 200}, {});
  const auto lines = extract_contours(grid, MetricId::Efficiency, {0.5, 0.7, 0.8});
  for (const auto& line : lines) {
    std::printf("efficiency %.1f: %zu vertices\n", line.level, line.vertices.size());
    for (double target : {1e5, 1e7, 1e9, 1e11}) {
      for (std::size_t i = 1; i < line.vertices.size(); ++i) {
        const auto& a = line.vertices[i - 1];
        const auto& b = line.vertices[i];
        if ((a.x - target) * (b.x - target) > 0 || a.x == b.x) continue;
        const double t = std::log(target / a.x) / std::log(b.x / a.x);
        std::printf("  g = %.0e Hz -> kappa <= %.3g Hz\n", target, a.y * std::pow(b.y / a.y, t));
        break;
      }
    }
  }
}
