#ifndef TUBESPEC_ERRORS_HPP
#define TUBESPEC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace tubespec {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input: malformed spec files, invalid shapes, violated preconditions.
/// The CLI maps this to exit code 2.
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure (non-convergence, indefinite mass matrix, ...).
/// The CLI maps this to exit code 1.
struct SolverError : Error {
  SolverError(const std::string& msg, std::vector<double> best_residuals = {},
              int iterations = 0)
      : Error(msg), residuals(std::move(best_residuals)), iterations(iterations) {}

  std::vector<double> residuals;  // best residuals reached before giving up
  int iterations;
};

}  // namespace tubespec

#endif
