#ifndef CVCONC_ERRORS_HPP
#define CVCONC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cvconc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the physical model.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The truncated Fock ladder discards more probability than allowed.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double discarded, int suggested_n_max)
      : Error(what), discarded_(discarded), suggested_n_max_(suggested_n_max) {}

  double discarded_mass() const { return discarded_; }
  int suggested_n_max() const { return suggested_n_max_; }

 private:
  double discarded_;
  int suggested_n_max_;
};

/// A conditional operation succeeds with (numerically) zero probability.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

/// No grid outcome satisfies the acceptance threshold.
class EmptyRegionError : public Error {
 public:
  EmptyRegionError(const std::string& what, double max_merit)
      : Error(what), max_merit_(max_merit) {}

  /// Largest figure of merit seen on the grid.
  double max_merit() const { return max_merit_; }

 private:
  double max_merit_;
};

/// Overflow or NaN in an evaluation that is expected to stay finite.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvconc

#endif  // CVCONC_ERRORS_HPP
