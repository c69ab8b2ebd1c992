#include <catch_amalgamated.hpp>

#include <cmath>

#include "interlink/benchmark.hpp"
#include "interlink/regimes.hpp"
#include "oracles.hpp"

using namespace interlink;

TEST_CASE("classify_regime", "[regimes]") {
  CHECK(classify_regime(1e8, 1e6, 1e6).regime == Regime::Strong);
  CHECK(classify_regime(1e6, 1e9, 1.0).regime == Regime::Weak);

  // g^2/kappa = 1e6 = kappa, and 1e6 >= 10 * 1e3
  CHECK(classify_regime(1e6, 1e6, 1e3).regime == Regime::Intermediate);
  // kappa / (g^2/kappa) = 2.25: intermediate under T = 3, not under T = 1.5
  CHECK(classify_regime(1e6, 1.5e6, 1e3).regime == Regime::Intermediate);
  CHECK(classify_regime(1e6, 1.5e6, 1e3, {10.0, 1.5}).regime == Regime::Unclassified);

  const auto liu = classify_regime(3.2e6, 1e6, 2.6e6);
  CHECK(liu.regime == Regime::Unclassified);
  CHECK(liu.reason.find("strong") != std::string::npos);
  CHECK(liu.reason.find("intermediate: kappa not within T") != std::string::npos);

  CHECK_THROWS_AS(classify_regime(0.0, 1.0, 1.0), InvalidParameter);
  CHECK_THROWS_AS(classify_regime(1.0, 1.0, 1.0, {1.0, 3.0}), InvalidParameter);
  CHECK_THROWS_AS(classify_regime(1.0, 1.0, 1.0, {10.0, 0.5}), InvalidParameter);
}

TEST_CASE("coupling_margin", "[regimes]") {
  CHECK(coupling_margin(1e8, 1e6, 1e6) == 100.0);
  CHECK(std::abs(coupling_margin(3.2e6, 1e6, 2.6e6) - 3.2 / 2.6) < 1e-12);
  CHECK(std::abs(coupling_margin(38e6, 1.3e6, 96e6) - 38.0 / 96.0) < 1e-12);
  CHECK_THROWS_AS(coupling_margin(1.0, -1.0, 1.0), InvalidParameter);
}

TEST_CASE("Strong exactly when margin reaches R", "[regimes][property]") {
  oracle::RateSampler s(99);
  for (int i = 0; i < 2000; ++i) {
    const double g = s(2, 12), k = s(2, 12), gm = s(2, 12);
    const RegimeThresholds th{std::uniform_real_distribution<double>(1.5, 50.0)(s.rng), 3.0};
    CHECK((classify_regime(g, k, gm, th).regime == Regime::Strong) == (coupling_margin(g, k, gm) >= th.r_much_greater));
  }
}

TEST_CASE("labels are invariant under uniform scaling", "[regimes][property]") {
  oracle::RateSampler s(5);
  for (int i = 0; i < 2000; ++i) {
    const double g = s(2, 12), k = s(2, 12), gm = s(2, 12);
    const auto base = classify_regime(g, k, gm).regime;
    for (double scale : {2.0, 0.5, 1024.0}) {
      CHECK(classify_regime(scale * g, scale * k, scale * gm).regime == base);
    }
    const double sc = s(-3, 3);
    CHECK(classify_regime(sc * g, sc * k, sc * gm).regime == base);
  }
}

TEST_CASE("no gamma-complete bundled technology is strongly coupled", "[regimes]") {
  int checked = 0;
  for (const auto& r : bundled_registry()) {
    if (!r.gamma) continue;
    ++checked;
    CHECK(classify_regime(r.g, r.kappa, *r.gamma).regime != Regime::Strong);
    CHECK(coupling_margin(r.g, r.kappa, *r.gamma) < 10.0);
  }
  CHECK(checked == 8);
}
