#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csbp {

/// Invalid model, matrix, or algorithm parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector or matrix dimensions that do not fit together.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value outside the representable range (e.g. a mean off the grid).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Non-finite or otherwise unusable input data.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A message density that collapsed to zero mass (or non-finite values).
class DegenerateMessageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size above a hard cap (exact enumeration).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numerical failure such as a non positive-definite covariance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Bad experiment configuration (unknown key, bad value, unsatisfiable sweep).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csbp
