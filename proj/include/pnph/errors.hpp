#ifndef PNPH_ERRORS_HPP
#define PNPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pnph {

/// Invalid configuration, geometry parameters, or file contents (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Linear or nonlinear solve failed to converge (CLI exit code 3).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Physically meaningful regime breakdown, e.g. salt depletion in the
/// electroneutral limit (CLI exit code 4).
struct RegimeError : std::runtime_error {
  explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pnph

#endif
