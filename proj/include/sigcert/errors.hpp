#pragma once

#include <stdexcept>
#include <string>

namespace sigcert {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an interface contract (mismatched alphabets, bad index,
/// wrong dimension).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Operation is undefined for the given mathematical input.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A pairing needed a signature level above the truncation level.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Check configuration is inconsistent (word length vs truncation, tolerances).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input. `position` is a 0-based character offset for
/// expression parsers and a 1-based line number for file readers.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace sigcert
