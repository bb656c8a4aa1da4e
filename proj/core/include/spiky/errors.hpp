#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spiky {

/// Base class for every failure raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or violated preconditions (bad rank, out-of-range
/// threshold, mismatched dimensions).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::uint64_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

/// Corrupt or truncated on-disk artifact; carries the byte offset at which
/// reading failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::uint64_t byte_offset)
      : Error(message + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}

  std::uint64_t byte_offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Numerical failure: non-finite data or solver breakdown.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace spiky
