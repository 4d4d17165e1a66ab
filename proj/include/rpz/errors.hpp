#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (q not in (0,1), n < 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A root multiset or measure that should be closed under conjugation is not.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// A theorem hypothesis required by the operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Simultaneous iteration did not certify every root within the sweep budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<std::complex<double>> best_iterate,
                   std::vector<double> residuals)
      : Error(what), best_iterate_(std::move(best_iterate)), residuals_(std::move(residuals)) {}

  const std::vector<std::complex<double>>& best_iterate() const noexcept { return best_iterate_; }
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<std::complex<double>> best_iterate_;
  std::vector<double> residuals_;
};

/// Quadrature (or another numerical estimate) missed its requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Energy estimate diverged to -infinity (atoms, duplicated points, ...).
class DivergentEnergyError : public Error {
 public:
  using Error::Error;
};

/// Symmetric discretization could not reach the required minimal separation.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// A sign decision fell inside the floating-point guard band.
class InconclusiveError : public Error {
 public:
  InconclusiveError(const std::string& what, std::size_t index, double value, double guard)
      : Error(what), index_(index), value_(value), guard_(guard) {}
  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }
  double guard() const noexcept { return guard_; }

 private:
  std::size_t index_;
  double value_;
  double guard_;
};

}  // namespace rpz
