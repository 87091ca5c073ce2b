#pragma once

#include <stdexcept>
#include <string>

namespace fame {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file or unreadable path.
struct ParseError : Error {
  using Error::Error;
};

/// A semantic invariant is violated (bad axis norm, cycle, limit violation...).
/// The message names the offending entity.
struct ValidationError : Error {
  using Error::Error;
};

/// Vector/matrix sizes do not match the model.
struct DimensionError : Error {
  using Error::Error;
};

/// NaN or non-finite value reached a pipeline stage.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace fame
