#pragma once

#include <stdexcept>
#include <string>

namespace klvq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration or argument violates a stated bound (k > N, M > N, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A numerical operation is undefined for its inputs.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. The message carries the offending line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Model file does not satisfy the expected schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace klvq
