#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsalpha {

/// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unsorted breakpoints, non-finite values, bad tails.
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(index >= 0 ? what + " (index " + std::to_string(index) + ")" : what),
        index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// A scalar parameter is out of its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Data that is well formed but mutually inconsistent, e.g. a negative
/// radicand in the projection.
class InconsistentInputError : public Error {
 public:
  InconsistentInputError(const std::string& what, std::ptrdiff_t cell = -1)
      : Error(cell >= 0 ? what + " (cell " + std::to_string(cell) + ")" : what),
        cell_(cell) {}
  std::ptrdiff_t cell() const noexcept { return cell_; }

 private:
  std::ptrdiff_t cell_;
};

/// A Lagrangian state that cannot have come out of the solver.
class CorruptedStateError : public Error {
 public:
  using Error::Error;
};

class NonContractionError : public Error {
 public:
  NonContractionError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class DegenerateReferenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hsalpha
