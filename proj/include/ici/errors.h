#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ici {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, non-finite entries, invalid weights, etc.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A numerical routine failed to produce a trustworthy answer.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Raised by the eigenvalue solver when the QR sweep cap is exhausted.
class ConvergenceFailure : public NumericalFailure {
 public:
  ConvergenceFailure(const std::string& what, std::size_t iterations)
      : NumericalFailure(what), iterations_(iterations) {}
  std::size_t iterations() const { return iterations_; }

 private:
  std::size_t iterations_;
};

/// LU factorisation hit a pivot that is zero relative to the matrix scale.
class SingularMatrixError : public NumericalFailure {
 public:
  SingularMatrixError(const std::string& what, double pivot)
      : NumericalFailure(what), pivot_(pivot) {}
  double pivot() const { return pivot_; }

 private:
  double pivot_;
};

/// A subsystem (or average system) has a singular state matrix, so -A^{-1}b
/// does not exist.
class NoEquilibriumError : public NumericalFailure {
 public:
  NoEquilibriumError(const std::string& what, std::size_t subsystem)
      : NumericalFailure(what), subsystem_(subsystem) {}
  /// 0-based subsystem index; npos for an average system.
  std::size_t subsystem() const { return subsystem_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t subsystem_;
};

/// The stability precondition of an analysis does not hold (unstable average
/// matrix, non-contracting Poincare map).
class InstabilityError : public Error {
 public:
  using Error::Error;
};

class DegenerateCycleError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace ici
