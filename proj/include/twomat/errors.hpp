#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace twomat {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

class ModelError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "model_invalid"; }
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "convergence"; }
};

class PoleProximityError : public Error {
 public:
  PoleProximityError(double imag, double floor)
      : Error("pole too close to the real axis: |Im| = " + std::to_string(imag) + " is below the floor " +
              std::to_string(floor)),
        floor_(floor) {}
  const char* kind() const noexcept override { return "pole_proximity"; }
  double floor() const noexcept { return floor_; }

 private:
  double floor_;
};

class BimomentError : public Error {
 public:
  BimomentError(std::size_t i, std::size_t j, double err)
      : Error("bimoment (" + std::to_string(i) + ", " + std::to_string(j) + ") failed to converge, error estimate " +
              std::to_string(err)),
        i_(i),
        j_(j) {}
  const char* kind() const noexcept override { return "bimoment"; }
  std::size_t row() const noexcept { return i_; }
  std::size_t col() const noexcept { return j_; }

 private:
  std::size_t i_, j_;
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(std::size_t index)
      : Error("degenerate pivot in bimoment factorization at index " + std::to_string(index) + "; reduce the order"),
        index_(index) {}
  const char* kind() const noexcept override { return "degeneracy"; }
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class IndexError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "index_out_of_range"; }
};

class CoincidenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "coincidence"; }
};

class DistinctnessError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "distinctness"; }
};

class UnsupportedConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "unsupported_configuration"; }
};

class ContourError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "contour"; }
};

class FiniteDifferenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "finite_difference"; }
};

/// Malformed or invalid job input. `location` is a line/column or a JSON
/// pointer into the document.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string location) : Error(message), location_(std::move(location)) {}
  const char* kind() const noexcept override { return "parse"; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace twomat
