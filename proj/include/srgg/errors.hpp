#pragma once

#include <stdexcept>
#include <string>

namespace srgg {

// Base of all library errors. The CLI maps the three families onto exit
// codes: InputError -> 2, ShapeError -> 3, NumericError -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};

// --- input family ---
struct ParseError : InputError {
  using InputError::InputError;
};
struct EmptyData : InputError {
  using InputError::InputError;
};

// --- shape family ---
struct LengthMismatch : ShapeError {
  using ShapeError::ShapeError;
};
struct DimensionMismatch : ShapeError {
  using ShapeError::ShapeError;
};
struct TooManyRows : ShapeError {
  using ShapeError::ShapeError;
};
struct EmptyTrace : ShapeError {
  using ShapeError::ShapeError;
};
struct EmptyPostBurnin : ShapeError {
  using ShapeError::ShapeError;
};

// --- numeric family ---
struct NotSymmetric : NumericError {
  using NumericError::NumericError;
};
struct RidgeExhausted : NumericError {
  using NumericError::NumericError;
};
struct SingularFactor : NumericError {
  using NumericError::NumericError;
};
struct SingularCorrelation : NumericError {
  using NumericError::NumericError;
};
struct ZeroVariance : NumericError {
  using NumericError::NumericError;
};
struct DegenerateRanks : NumericError {
  using NumericError::NumericError;
};
struct NonpositiveVariance : NumericError {
  using NumericError::NumericError;
};
struct ZeroUncertainty : NumericError {
  using NumericError::NumericError;
};
struct ScaleOverflow : NumericError {
  using NumericError::NumericError;
};
struct InvalidCorrelationEntry : NumericError {
  using NumericError::NumericError;
};
struct DegenerateClass : NumericError {
  using NumericError::NumericError;
};

}  // namespace srgg
