#pragma once

#include <stdexcept>
#include <string>

namespace qbsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Truncating a state discarded more probability mass than the tolerance allows.
struct TailTooLarge : Error {
  TailTooLarge(double tail_, double tolerance_)
      : Error("truncation tail " + std::to_string(tail_) + " exceeds tolerance " +
              std::to_string(tolerance_)),
        tail(tail_),
        tolerance(tolerance_) {}
  double tail;
  double tolerance;
};

// A realized density matrix fails the positive-semidefiniteness bound.
struct NotPositive : Error {
  explicit NotPositive(double min_eigenvalue_)
      : Error("density matrix not positive semidefinite, min eigenvalue " +
              std::to_string(min_eigenvalue_)),
        min_eigenvalue(min_eigenvalue_) {}
  double min_eigenvalue;
};

// Injected atoms are entirely in one level; the tuning parameter is undefined.
struct DegenerateAtom : Error {
  using Error::Error;
};

struct DegenerateSeed : Error {
  using Error::Error;
};

// The two-level attenuation model is invalid (one-photon population >= 1).
struct InvalidTruncation : Error {
  using Error::Error;
};

// tr(rho a) = 0: the attenuated states commute and cannot be discriminated.
struct ZeroMeanAmplitude : Error {
  using Error::Error;
};

struct StatesIdentical : Error {
  using Error::Error;
};

struct ValidationError : Error {
  ValidationError(const std::string& field_, const std::string& message)
      : Error(field_.empty() ? message : field_ + ": " + message), field(field_) {}
  std::string field;
};

struct ParseError : Error {
  ParseError(const std::string& path_, const std::string& message)
      : Error(path_.empty() ? message : path_ + ": " + message), path(path_) {}
  std::string path;
};

}  // namespace qbsim
