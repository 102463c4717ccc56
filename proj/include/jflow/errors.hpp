#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jflow {

/// A spectrum left (or was never in) the Garding cone of the flow.
class ConeViolation : public std::runtime_error {
 public:
  ConeViolation(const std::string& what, std::vector<double> spectrum,
                std::size_t point = kNoPoint)
      : std::runtime_error(what), spectrum_(std::move(spectrum)), point_(point) {}

  static constexpr std::size_t kNoPoint = static_cast<std::size_t>(-1);

  const std::vector<double>& spectrum() const noexcept { return spectrum_; }
  /// Flat grid index of the offending point, or kNoPoint for a bare spectrum.
  std::size_t point() const noexcept { return point_; }

 private:
  std::vector<double> spectrum_;
  std::size_t point_;
};

/// An iterative numerical routine failed (e.g. eigen solver non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (bad indices, non-positive normalization, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jflow
