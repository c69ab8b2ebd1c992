#pragma once

// Coupling-regime classification for a (g, kappa, gamma) triple.
//
//   Strong        g >= R kappa  and  g >= R gamma
//   Intermediate  kappa within a factor T of g^2/kappa,  g^2/kappa >= R gamma
//   Weak          kappa >= R g^2/kappa,                  g^2/kappa >= R gamma
//
// R encodes "much greater than" and T encodes "approximately equal". The
// first matching label wins; a triple matching none is Unclassified.

#include <algorithm>
#include <cmath>
#include <string>

#include "interlink/errors.hpp"

namespace interlink {

struct RegimeThresholds {
  double r_much_greater = 10.0;
  double t_approx = 3.0;

  void validate() const {
    if (!(r_much_greater > 1.0) || !std::isfinite(r_much_greater)) {
      throw InvalidParameter("r_much_greater must be > 1");
    }
    if (!(t_approx >= 1.0) || !std::isfinite(t_approx)) {
      throw InvalidParameter("t_approx must be >= 1");
    }
  }

  bool operator==(const RegimeThresholds&) const = default;
};

enum class Regime { Strong, Intermediate, Weak, Unclassified };

struct RegimeLabel {
  Regime regime = Regime::Unclassified;
  std::string reason;  // failed predicates, only for Unclassified

  bool operator==(const RegimeLabel&) const = default;
};

inline const char* regime_name(Regime r) noexcept {
  switch (r) {
    case Regime::Strong: return "strong";
    case Regime::Intermediate: return "intermediate";
    case Regime::Weak: return "weak";
    case Regime::Unclassified: return "unclassified";
  }
  return "?";
}

// g / max(kappa, gamma); >= R exactly when the Strong predicate holds.
inline double coupling_margin(double g, double kappa, double gamma) {
  detail::require_positive(g, "g");
  detail::require_positive(kappa, "kappa");
  detail::require_positive(gamma, "gamma");
  return g / std::max(kappa, gamma);
}

inline RegimeLabel classify_regime(double g, double kappa, double gamma, const RegimeThresholds& th = {}) {
  detail::require_positive(g, "g");
  detail::require_positive(kappa, "kappa");
  detail::require_positive(gamma, "gamma");
  th.validate();
  const double r = th.r_much_greater;

  // Written through coupling_margin so the Strong <=> margin >= R identity
  // holds bit for bit.
  const bool strong = coupling_margin(g, kappa, gamma) >= r;
  if (strong) return {Regime::Strong, {}};

  // Scale-invariant ratios: g^2/kappa compared against kappa and gamma.
  const double kappa_over_eff = kappa / (g / kappa * g);    // kappa / (g^2/kappa)
  const double eff_over_gamma = (g / kappa * g) / gamma;    // (g^2/kappa) / gamma
  const bool eff_dominates_gamma = eff_over_gamma >= r;
  const bool kappa_approx_eff = std::max(kappa_over_eff, 1.0 / kappa_over_eff) <= th.t_approx;
  const bool kappa_dominates_eff = kappa_over_eff >= r;

  if (kappa_approx_eff && eff_dominates_gamma) return {Regime::Intermediate, {}};
  if (kappa_dominates_eff && eff_dominates_gamma) return {Regime::Weak, {}};

  std::string reason = "strong: g < R*max(kappa,gamma)";
  reason += kappa_approx_eff ? "" : "; intermediate: kappa not within T of g^2/kappa";
  reason += kappa_dominates_eff ? "" : "; weak: kappa < R*g^2/kappa";
  reason += eff_dominates_gamma ? "" : "; intermediate/weak: g^2/kappa < R*gamma";
  return {Regime::Unclassified, std::move(reason)};
}

}  // namespace interlink
