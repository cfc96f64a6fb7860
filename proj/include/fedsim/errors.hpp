#pragma once

#include <stdexcept>
#include <string>

namespace fedsim {

// Base for failures of numerical origin (as opposed to bad arguments, which
// use std::invalid_argument). The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iteration produced a non-finite value or ran away past the divergence
// guard. `step` is the round / local step at which the blow-up was detected.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& msg, long step)
      : NumericalError(msg), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

// A linear system or curvature matrix is singular (or close enough that a
// solve would be meaningless).
class SingularMatrixError : public NumericalError {
 public:
  explicit SingularMatrixError(const std::string& msg) : NumericalError(msg) {}
};

}  // namespace fedsim
