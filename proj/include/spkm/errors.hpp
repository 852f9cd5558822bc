#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spkm {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class ZeroNormError : public Error {
 public:
  using Error::Error;
};

// One or more dataset rows have no non-zero entries. `rows()` lists them.
class ZeroNormRowsError : public ZeroNormError {
 public:
  explicit ZeroNormRowsError(std::vector<std::size_t> rows);
  const std::vector<std::size_t>& rows() const { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

// Requested k cannot be satisfied by the data (k == 0 or k > n).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid parameter value (alpha out of range, unknown variant, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spkm
