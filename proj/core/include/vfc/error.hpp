#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vfc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed unified diff; `line()` is the 1-based input line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A CommitDiff that violates hunk count invariants cannot be rendered.
class RenderError : public Error {
 public:
  using Error::Error;
};

/// No grammar is registered for the requested language.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or violated precondition on parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The input data cannot support the requested operation.
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vfc
