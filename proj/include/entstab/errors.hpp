#pragma once

#include <stdexcept>
#include <string>

namespace entstab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation (e.g. p outside (0,1)).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Root bracket endpoints do not straddle a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature ran out of its subdivision budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double partial_value,
                  double err_estimate)
      : Error(what), partial_value_(partial_value), err_estimate_(err_estimate) {}

  double partial_value() const { return partial_value_; }
  double err_estimate() const { return err_estimate_; }

 private:
  double partial_value_;
  double err_estimate_;
};

// A Distribution (or one of its parts) violates its invariants.
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

// An input does not satisfy a catalogue entry's requirement. `requirement()`
// is the exact requirement string listed on the entry.
class PreconditionError : public Error {
 public:
  PreconditionError(std::string requirement, const std::string& detail)
      : Error("unmet requirement '" + requirement + "': " + detail),
        requirement_(std::move(requirement)) {}

  const std::string& requirement() const { return requirement_; }

 private:
  std::string requirement_;
};

// Unknown bound identifier, or an operation not supported by an entry.
class CatalogueError : public Error {
 public:
  using Error::Error;
};

// Invalid harness or CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input document. `field()` names the offending JSON path.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& detail)
      : Error(field + ": " + detail), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace entstab
