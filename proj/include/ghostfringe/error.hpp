#pragma once

#include <stdexcept>
#include <string>

namespace ghostfringe {

/// Invalid user-supplied parameters (geometry, spectra, scans, run configs).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical self-test failed, e.g. the quadrature grid is too coarse.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ghostfringe
