#pragma once

#include <stdexcept>
#include <string>

namespace penlmc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative projection exceeded its iteration cap.
struct NonConvergence : Error {
  using Error::Error;
};

// Matrix failed the positive-definite factorization.
struct NotSPD : Error {
  using Error::Error;
};

// Body does not have the origin in its interior (or is otherwise malformed).
struct InvalidBody : Error {
  using Error::Error;
};

// Argument outside the operation's domain.
struct DomainError : Error {
  using Error::Error;
};

// A chain produced a NaN/Inf position.
struct NonFinite : Error {
  using Error::Error;
};

// Empirical measures of different size/dimension.
struct SizeMismatch : Error {
  using Error::Error;
};

// Radial density with (numerically) no mass.
struct DegenerateDensity : Error {
  using Error::Error;
};

// Regression input with fewer than 3 points or non-positive values.
struct DegenerateInput : Error {
  using Error::Error;
};

// Unknown (algorithm, metric) pair in a schedule request.
struct UnsupportedCombination : Error {
  using Error::Error;
};

// Config file could not be parsed; carries line/field context in the message.
struct ParseError : Error {
  using Error::Error;
};

// Config parsed but failed validation; message lists all violations.
struct ValidationError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace penlmc
