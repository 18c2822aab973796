#pragma once

#include <stdexcept>
#include <string>

namespace polsel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownGroup : public Error {
 public:
  using Error::Error;
};

class UnknownIrrep : public Error {
 public:
  using Error::Error;
};

class GroupMismatch : public Error {
 public:
  using Error::Error;
};

/// A character vector that does not reduce to a non-negative integral
/// combination of irreducible characters.
class InvalidRepresentation : public Error {
 public:
  using Error::Error;
};

/// A character table that failed verification.
class InvalidTable : public Error {
 public:
  using Error::Error;
};

class UnsupportedPolarization : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class RankDeficientFit : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace polsel
