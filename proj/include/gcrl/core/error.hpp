#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcrl {

// Base class for all recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration (bad plan, mismatched env kind, bad hyperparameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Text could not be parsed. `begin`/`end` are character offsets into the
// offending input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t begin, std::size_t end)
      : Error(what + " at [" + std::to_string(begin) + ", " + std::to_string(end) + ")"),
        begin_(begin),
        end_(end) {}

  std::size_t begin() const noexcept { return begin_; }
  std::size_t end() const noexcept { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

// A numerical invariant was violated (NaN parameters, non-finite loss).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcrl
