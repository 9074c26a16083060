#pragma once

#include <stdexcept>
#include <string>

namespace rdciag {

// Block shapes disagree (vector vs layout, operator entry vs declared dims).
struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// A gradient snapshot aged past the declared delay bound tau.
struct StalenessError : std::runtime_error {
  explicit StalenessError(const std::string& what) : std::runtime_error(what) {}
};

// Requested an operation needing mu > 0 on a component with mu == 0.
struct UnsupportedComponentError : std::runtime_error {
  explicit UnsupportedComponentError(const std::string& what)
      : std::runtime_error(what) {}
};

// Dual objective blew up past the divergence guard during a run.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Not enough usable data points for a fit or an estimate.
struct InsufficientDataError : std::runtime_error {
  explicit InsufficientDataError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace rdciag
