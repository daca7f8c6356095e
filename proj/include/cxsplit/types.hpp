#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cxsplit {

using Complex = std::complex<double>;

/// State carried through the sub-flows. Entries are complex even for real
/// problems; the stepper projects back to the real axis after each step.
using State = std::vector<Complex>;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotInCatalog : public Error {
 public:
  explicit NotInCatalog(const std::string& name)
      : Error("scheme not in catalog: " + name) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `violation()` is a short tag such as "consistency-a" or "symmetry".
class ValidationError : public Error {
 public:
  ValidationError(std::string violation, const std::string& detail)
      : Error(violation + ": " + detail), violation_(std::move(violation)) {}
  const std::string& violation() const { return violation_; }

 private:
  std::string violation_;
};

class InvalidSequence : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public Error {
 public:
  using Error::Error;
};

class StepFailed : public Error {
 public:
  StepFailed(std::size_t stage, const std::string& msg)
      : Error("stage " + std::to_string(stage) + ": " + msg), stage_(stage) {}
  std::size_t stage() const { return stage_; }

 private:
  std::size_t stage_;
};

/// Raised when an A or B evaluation would be requested at a complex time.
class ComplexTimeError : public Error {
 public:
  using Error::Error;
};

}  // namespace cxsplit
