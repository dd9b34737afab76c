#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcanml {

// Root of everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a formula (k out of range,
// invalid grid step, ln of a nonpositive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative routine ran out of iterations.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iteration_cap)
      : Error(what + " (iteration cap " + std::to_string(iteration_cap) + ")"),
        iteration_cap_(iteration_cap) {}

  int iteration_cap() const noexcept { return iteration_cap_; }

 private:
  int iteration_cap_;
};

// The data itself is unusable: malformed files, nonpositive prices, ...
class DataError : public Error {
 public:
  using Error::Error;
};

// Input that is well-formed but carries no information for the requested
// computation (all-zero matrix, constant column).
class DegenerateInputError : public DataError {
 public:
  using DataError::DataError;
};

// CSV parse failure. Row and column are 1-based and count data rows only,
// i.e. a header line is not row 1.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t col)
      : DataError(what + " at (" + std::to_string(row) + "," + std::to_string(col) + ")"),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

}  // namespace pcanml
