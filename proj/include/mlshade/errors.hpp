#ifndef MLSHADE_ERRORS_HPP
#define MLSHADE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlshade {

/// Malformed input file; carries the 1-based line where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Input parsed but violates a structural requirement (e.g. non-orthonormal rotation).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Too little data to perform the operation (e.g. covariance of fewer than 2 points).
class DegenerateInput : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure failed to converge.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective returned a non-finite value.
class EvaluationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad run/experiment configuration.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mlshade

#endif
