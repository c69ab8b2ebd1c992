#pragma once

// Closed-form interconnect metrics for a single cavity-QED operating point.
//
// All rates are plain Hz; nothing is converted to angular frequency. The
// infidelity and latency expressions are proportionalities whose constants are
// fixed to 1, so the figure of merit is a relative score: it ranks
// configurations, it does not predict an absolute transfer rate.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interlink/errors.hpp"

namespace interlink {

// Parameters shared by every point of a sweep or a registry evaluation.
struct EnvironmentDefaults {
  double kappa_ex = 1e6;   // external cavity decay rate, Hz
  double i_g_prime = 1.0;  // intrinsic imperfection rate, Hz
  double delta = 2e9;      // qubit-cavity detuning, Hz
  double alpha = 0.5;      // efficiency weight, open interval (0, 1)

  void validate() const {
    detail::require_positive(kappa_ex, "kappa_ex");
    detail::require_non_negative(i_g_prime, "i_g_prime");
    detail::require_non_negative(delta, "delta");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw InvalidParameter("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
  }

  bool operator==(const EnvironmentDefaults&) const = default;
};

struct OperatingPoint {
  double g = 0.0;          // coupling strength, Hz
  double kappa = 0.0;      // total cavity decay rate, Hz
  double gamma = 0.0;      // qubit decay rate, Hz
  double kappa_ex = 1e6;   // Hz
  double i_g_prime = 1.0;  // Hz
  double delta = 2e9;      // Hz
  std::optional<double> g_eff;  // coupling used by the latency model; follows g when unset

  double effective_coupling() const noexcept { return g_eff.value_or(g); }

  void validate() const {
    detail::require_positive(g, "g");
    detail::require_positive(kappa, "kappa");
    detail::require_positive(gamma, "gamma");
    detail::require_positive(kappa_ex, "kappa_ex");
    detail::require_non_negative(i_g_prime, "i_g_prime");
    detail::require_non_negative(delta, "delta");
    if (g_eff) detail::require_positive(*g_eff, "g_eff");
  }

  bool operator==(const OperatingPoint&) const = default;
};

inline OperatingPoint make_point(double g, double kappa, double gamma,
                                 const EnvironmentDefaults& env = {}) {
  return OperatingPoint{g, kappa, gamma, env.kappa_ex, env.i_g_prime, env.delta, std::nullopt};
}

// Warning tags attached to a MetricSet. Values are reported raw; the flags
// only mark points where the efficiency model leaves its physical range.
class ValidityFlags {
 public:
  enum Tag : std::uint8_t {
    kExceedsUnity = 1u << 0,         // efficiency > 1
    kExternalExceedsTotal = 1u << 1  // kappa_ex > kappa
  };

  constexpr ValidityFlags() = default;
  constexpr explicit ValidityFlags(std::uint8_t bits) : bits_(bits) {}

  constexpr bool has(Tag t) const noexcept { return (bits_ & t) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr void set(Tag t) noexcept { bits_ |= t; }
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  constexpr ValidityFlags operator|(ValidityFlags o) const noexcept {
    return ValidityFlags(static_cast<std::uint8_t>(bits_ | o.bits_));
  }

  std::vector<std::string> tags() const {
    std::vector<std::string> out;
    if (has(kExceedsUnity)) out.emplace_back("exceeds-unity");
    if (has(kExternalExceedsTotal)) out.emplace_back("external-exceeds-total");
    return out;
  }

  // Tags joined by ';', empty string when no flag is set.
  std::string to_string() const {
    std::string s;
    for (const auto& t : tags()) {
      if (!s.empty()) s += ';';
      s += t;
    }
    return s;
  }

  bool operator==(const ValidityFlags&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

struct MetricSet {
  double cooperativity = 0.0;
  double efficiency = 0.0;
  double infidelity = 0.0;
  double latency = 0.0;  // seconds
  double fom = 0.0;      // relative units, 1/s
  ValidityFlags flags;

  bool operator==(const MetricSet&) const = default;
};

enum class MetricId { Cooperativity, Efficiency, Infidelity, Latency, Fom };

inline double metric_value(const MetricSet& m, MetricId id) noexcept {
  switch (id) {
    case MetricId::Cooperativity: return m.cooperativity;
    case MetricId::Efficiency: return m.efficiency;
    case MetricId::Infidelity: return m.infidelity;
    case MetricId::Latency: return m.latency;
    case MetricId::Fom: return m.fom;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

inline const char* metric_name(MetricId id) noexcept {
  switch (id) {
    case MetricId::Cooperativity: return "cooperativity";
    case MetricId::Efficiency: return "efficiency";
    case MetricId::Infidelity: return "infidelity";
    case MetricId::Latency: return "latency";
    case MetricId::Fom: return "fom";
  }
  return "?";
}

inline std::optional<MetricId> parse_metric(std::string_view s) noexcept {
  for (auto id : {MetricId::Cooperativity, MetricId::Efficiency, MetricId::Infidelity,
                  MetricId::Latency, MetricId::Fom}) {
    if (s == metric_name(id)) return id;
  }
  if (s == "latency_s") return MetricId::Latency;
  return std::nullopt;
}

// g^2 / (kappa gamma)
inline double cooperativity(double g, double kappa, double gamma) {
  detail::require_positive(g, "g");
  detail::require_positive(kappa, "kappa");
  detail::require_positive(gamma, "gamma");
  return (g * g) / (kappa * gamma);
}

inline double cooperativity(const OperatingPoint& p) { return cooperativity(p.g, p.kappa, p.gamma); }

// Success probability of deterministic single-photon transfer:
// (kappa_ex/kappa) * 2C/(1+2C) * (1 - I_g'/(kappa C)).
// Not clamped: exceeds 1 when kappa < kappa_ex and goes negative when
// g^2 < I_g' gamma.
inline double efficiency(const OperatingPoint& p) {
  const double c = cooperativity(p);
  detail::require_positive(p.kappa_ex, "kappa_ex");
  detail::require_non_negative(p.i_g_prime, "i_g_prime");
  const double extraction = p.kappa_ex / p.kappa;
  const double coherent = (2.0 * c) / (1.0 + 2.0 * c);
  const double loss = 1.0 - p.i_g_prime / (p.kappa * c);
  return extraction * coherent * loss;
}

inline ValidityFlags efficiency_flags(const OperatingPoint& p, double efficiency_value) noexcept {
  ValidityFlags f;
  if (efficiency_value > 1.0) f.set(ValidityFlags::kExceedsUnity);
  if (p.kappa_ex > p.kappa) f.set(ValidityFlags::kExternalExceedsTotal);
  return f;
}

// sqrt(kappa gamma) / g, i.e. 1/sqrt(C).
inline double infidelity(const OperatingPoint& p) {
  detail::require_positive(p.g, "g");
  detail::require_positive(p.kappa, "kappa");
  detail::require_positive(p.gamma, "gamma");
  return std::sqrt(p.kappa * p.gamma) / p.g;
}

// (D^2 + gamma^2) / (2 g_eff^2 gamma + kappa (D^2 + gamma^2)), seconds.
// Only the denominator has to be positive, so kappa = 0 is accepted here.
inline double latency(const OperatingPoint& p) {
  const double g_eff = p.effective_coupling();
  detail::require_non_negative(g_eff, "g_eff");
  detail::require_non_negative(p.kappa, "kappa");
  detail::require_non_negative(p.gamma, "gamma");
  detail::require_non_negative(p.delta, "delta");
  const double spread = p.delta * p.delta + p.gamma * p.gamma;
  const double denom = 2.0 * g_eff * g_eff * p.gamma + p.kappa * spread;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw InvalidParameter("latency denominator 2 g_eff^2 gamma + kappa (delta^2 + gamma^2) must be positive");
  }
  return spread / denom;
}

namespace detail {

inline void require_weight(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParameter("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

// Shared by figure_of_merit and evaluate_point so both agree bit for bit.
inline double combine_fom(double alpha, double eff, double lat, double inf) noexcept {
  return (alpha * eff) / ((1.0 - alpha) * (lat * inf));
}

}  // namespace detail

// alpha * efficiency / ((1 - alpha) * latency * infidelity). Negative when the
// efficiency is negative.
inline double figure_of_merit(const OperatingPoint& p, double alpha) {
  detail::require_weight(alpha);
  const double eff = efficiency(p);
  const double lat = latency(p);
  const double inf = infidelity(p);
  return detail::combine_fom(alpha, eff, lat, inf);
}

inline MetricSet evaluate_point(const OperatingPoint& p, double alpha) {
  detail::require_weight(alpha);
  p.validate();
  MetricSet m;
  m.cooperativity = cooperativity(p);
  m.efficiency = efficiency(p);
  m.infidelity = infidelity(p);
  m.latency = latency(p);
  m.fom = detail::combine_fom(alpha, m.efficiency, m.latency, m.infidelity);
  m.flags = efficiency_flags(p, m.efficiency);
  return m;
}

// CODATA 2018.
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kReducedPlanck = 1.054571817e-34;        // J s

struct PhysicalCavityParams {
  double mu_ge = 0.0;          // transition dipole moment, C m
  double omega_ge = 0.0;       // qubit angular frequency, rad/s
  double a_eff = 0.0;          // effective mode area, m^2
  double cavity_length = 0.0;  // m
};

// g = sqrt(mu^2 omega / (2 eps0 hbar A_eff L)), returned in Hz.
inline double coupling_from_physical(const PhysicalCavityParams& c) {
  detail::require_positive(c.mu_ge, "mu_ge");
  detail::require_positive(c.omega_ge, "omega_ge");
  detail::require_positive(c.a_eff, "a_eff");
  detail::require_positive(c.cavity_length, "cavity_length");
  const double numerator = c.mu_ge * c.mu_ge * c.omega_ge;
  const double denominator = 2.0 * kVacuumPermittivity * kReducedPlanck * c.a_eff * c.cavity_length;
  return std::sqrt(numerator / denominator);
}

}  // namespace interlink
