#pragma once

#include <stdexcept>
#include <string>

namespace stochascope {

// Iterative eigenvalue estimation ran out of iterations. Carries the last
// Rayleigh-quotient estimate and the relative residual at abort time.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, double residual)
      : std::runtime_error(what), last_estimate_(last_estimate), residual_(residual) {}

  double last_estimate() const { return last_estimate_; }
  double residual() const { return residual_; }

 private:
  double last_estimate_;
  double residual_;
};

// File parsing failed; line is 1-based, 0 when the failure is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + (line > 0 ? " (line " + std::to_string(line) + ")" : "")),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

// A solver blew past the divergence guard.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double last_objective)
      : std::runtime_error(what), last_objective_(last_objective) {}

  double last_objective() const { return last_objective_; }

 private:
  double last_objective_;
};

}  // namespace stochascope
