#pragma once

#include <stdexcept>
#include <string>

namespace phosphene {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed an out-of-range or malformed argument.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input file does not follow the CSV/JSON layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Input file parses but violates a data invariant (duplicates, NaNs, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Model parameters violate their invariants.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A fit could not be carried out on the given data.
class FitError : public Error {
 public:
  using Error::Error;
};

// Pearson correlation is undefined because one input is constant.
class DegenerateVarianceError : public Error {
 public:
  DegenerateVarianceError() : Error("degenerate variance") {}
};

}  // namespace phosphene
