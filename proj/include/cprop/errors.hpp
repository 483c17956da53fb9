#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cprop {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scheme/arity mismatches: bad component indices, wrong tuple width, non-binary
// input where a binary constraint is required.
struct ArityError : Error {
  using Error::Error;
};

// A value (atom, assignment entry) falls outside the declared domain.
struct DomainError : Error {
  using Error::Error;
};

// A declared contract failed at run time: a transform grew a set, an update set
// missed a function required by the update assumptions, or a supposed common
// fixpoint is not one. Only raised by checks, never by normal propagation.
struct ContractViolation : Error {
  using Error::Error;
};

// Input to a path-family algorithm is not standardized (not exactly one binary
// constraint per variable pair).
struct StandardizeError : Error {
  using Error::Error;
};

// A variable order is not a permutation of the CSP's variables.
struct OrderingError : Error {
  using Error::Error;
};

// Malformed engine configuration, e.g. a commutativity set containing its own
// function or an index out of range.
struct ConfigError : Error {
  using Error::Error;
};

// An oracle was asked for an exhaustive check/enumeration beyond its cap.
struct CapacityError : Error {
  using Error::Error;
};

// Text-format errors carry the 1-based source line.
struct ParseError : Error {
  ParseError(std::size_t line_number, const std::string& message)
      : Error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
  std::size_t line;
};

}  // namespace cprop
