#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace naqae {

// Base of every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (bad lengths, unknown names...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Parameter outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A numerical routine did not converge within its budget.
class NumericFailure : public Error {
 public:
  using Error::Error;
};

// Data that carries no usable variance (e.g. constant observations in R^2).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// Depolarizing correction with zero coherence survival.
class SingularCorrectionError : public Error {
 public:
  using Error::Error;
};

// Floating-point result escaped its mathematical range by more than round-off.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

// Input file problems. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace naqae
