#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sloane_gap {

// Base of every error raised by the library. Derived types name the
// failing contract so callers can report module provenance.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedLine : public Error {
 public:
  MalformedLine(const std::string& reason, std::size_t line_number = 0)
      : Error(line_number == 0
                  ? "malformed line: " + reason
                  : "malformed line " + std::to_string(line_number) + ": " + reason),
        reason_(reason),
        line_number_(line_number) {}

  const std::string& reason() const noexcept { return reason_; }
  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::string reason_;
  std::size_t line_number_;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateX : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class RangeMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sloane_gap
