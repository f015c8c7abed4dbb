#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rainbow {

// Invalid parameters or inputs. Maps to exit code 2 in the CLI.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Anything that goes wrong inside a numerical routine. Maps to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the half-filled ground state is not unique (a zero mode sits
// at the Fermi level).
class FillingAmbiguity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::size_t index, double residual)
      : NumericalError(what + " (index " + std::to_string(index) +
                       ", residual " + std::to_string(residual) + ")"),
        index_(index),
        residual_(residual) {}

  std::size_t index() const noexcept { return index_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t index_;
  double residual_;
};

}  // namespace rainbow
