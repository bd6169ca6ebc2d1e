#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpade {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point handed to phi() lies in the interior of the compact set.
class PointInsideSetError : public Error {
 public:
  using Error::Error;
};

/// psi() was asked for a point with |w| <= 1.
class InsideUnitDiskError : public Error {
 public:
  using Error::Error;
};

/// Invalid geometry, node table, function or system description.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// Function evaluated on a pole or on a branch cut.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Aberth iteration did not converge; carries the best iterate.
class RootFindingError : public Error {
 public:
  RootFindingError(const std::string& what, std::vector<std::complex<double>> best)
      : Error(what), best_iterate(std::move(best)) {}
  std::vector<std::complex<double>> best_iterate;
};

/// Matrix or curve construction for an approximant failed.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Oracle asked about a function outside the rational-plus-one-branch class.
class UnsupportedFunctionError : public Error {
 public:
  using Error::Error;
};

/// The system has fewer than |m| system poles, so no rate is predicted.
class IncompletePoleCountError : public Error {
 public:
  using Error::Error;
};

/// Fewer than the minimum number of usable points for a rate fit.
class FitWindowError : public Error {
 public:
  using Error::Error;
};

/// Approximant evaluated at a zero of its denominator.
class NearPoleError : public Error {
 public:
  using Error::Error;
};

/// A probe set comes too close to a system pole or leaves the convergence domain.
class ProbeError : public Error {
 public:
  using Error::Error;
};

}  // namespace hpade
