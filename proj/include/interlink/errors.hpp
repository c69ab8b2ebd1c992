#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace interlink {

// A rate, ratio or weight outside the domain of a closed-form expression.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed run configuration: unknown key, unparseable value, bad axis.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Bad input data (registry rows) or an output that could not be written.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || v == std::numeric_limits<double>::infinity()) {
    throw InvalidParameter(std::string(name) + " must be a positive finite rate, got " + std::to_string(v));
  }
}

inline void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || v == std::numeric_limits<double>::infinity()) {
    throw InvalidParameter(std::string(name) + " must be non-negative and finite, got " + std::to_string(v));
  }
}

}  // namespace detail
}  // namespace interlink
