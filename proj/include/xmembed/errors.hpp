#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xmembed {

// Base type for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: empty ids, zero dimensions, empty weight arrays, ...
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Edge weights that are not positive finite reals.
class InvalidWeightError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Edge endpoints whose kinds are not song-keyword or image-keyword.
class KindViolationError : public Error {
 public:
  using Error::Error;
};

// A referenced vertex, keyword, song or image does not exist.
class UnresolvedReferenceError : public Error {
 public:
  using Error::Error;
};

class DuplicateKeyError : public Error {
 public:
  using Error::Error;
};

// A sampling distribution with no eligible items.
class EmptySupportError : public Error {
 public:
  using Error::Error;
};

// Model files with a bad magic, truncated payload or inconsistent sizes.
class CorruptModelError : public Error {
 public:
  using Error::Error;
};

// File-format errors; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& message)
      : Error(path + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace xmembed
