// Ranks the bundled technologies under the default environment and prints
// their coupling regime.

#include <cstdio>

#include "interlink/benchmark.hpp"

int main() {
  using namespace interlink;
  const auto report = evaluate_registry(bundled_registry());
  std::printf("%-24s %12s %10s %10s  %s\n", "technology", "fom", "C", "margin", "regime");
  for (const auto& ranked : report.ranking) {
    for (const auto& e : report.entries) {
      if (e.record.name != ranked.name) continue;
      std::printf("%-24s %12.4g %10.4g %10.4g  %s\n", ranked.name.c_str(), ranked.fom, e.metrics->cooperativity,
                  *e.margin, regime_name(e.regime->regime));
    }
  }
  for (const auto& [name, reason] : report.omitted) std::printf("%-24s (%s)\n", name.c_str(), reason.c_str());
}
