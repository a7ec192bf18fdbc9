#pragma once

#include <stdexcept>
#include <string>

namespace covertsim {

// Bad user input: malformed config, invalid distribution parameters,
// unhandled timers, unknown presets.
class ConfigurationError : public std::runtime_error {
public:
  explicit ConfigurationError(const std::string& what)
      : std::runtime_error(what) {}
};

// Broken internal invariant: negative round-trip time, event scheduled in
// the past, unmatched response. Always a bug, never user error.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

// Raised when an estimator has no usable samples (every run discarded).
class EstimationImpossibleError : public std::runtime_error {
public:
  explicit EstimationImpossibleError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace covertsim
