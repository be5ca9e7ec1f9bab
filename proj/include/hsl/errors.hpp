#pragma once

#include <stdexcept>
#include <string>

namespace hsl {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error("ZeroVector: cannot normalize a vector of (near) zero length") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("DimensionMismatch: expected dimension " + std::to_string(expected) +
              ", got " + std::to_string(actual)) {}
};

class NumericalBreakdown : public Error {
 public:
  explicit NumericalBreakdown(const std::string& what) : Error("NumericalBreakdown: " + what) {}
};

class NoCandidate : public Error {
 public:
  NoCandidate() : Error("NoCandidate: every realizable-oracle call was infeasible") {}
};

class FeatureBlowup : public Error {
 public:
  explicit FeatureBlowup(std::size_t count)
      : Error("FeatureBlowup: monomial expansion would have " + std::to_string(count) +
              " features") {}
};

class InsufficientBandSamples : public Error {
 public:
  InsufficientBandSamples(std::size_t got, std::size_t quota, std::size_t draws)
      : Error("InsufficientBandSamples: filled " + std::to_string(got) + " of " +
              std::to_string(quota) + " band samples after " + std::to_string(draws) +
              " draws") {}
};

class NoFeasibleSeparator : public Error {
 public:
  NoFeasibleSeparator() : Error("NoFeasibleSeparator: no halfspace is consistent with the sample") {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("ConfigError: " + what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IoError: " + what) {}
};

}  // namespace hsl
