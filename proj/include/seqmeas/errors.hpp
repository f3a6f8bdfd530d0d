#pragma once

#include <stdexcept>
#include <string>

namespace seqmeas {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatch between operands (non-square trace, incompatible product, ...).
struct DimensionError : Error {
  using Error::Error;
};

// Input outside an operation's mathematical domain (e.g. square root of a
// non-PSD matrix).
struct DomainError : Error {
  using Error::Error;
};

// A construction degenerated to nothing: Gram-Schmidt against a parallel
// vector, an indefinite-order combinator that cancels exactly, ...
struct DegeneracyError : Error {
  using Error::Error;
};

// Expression text that does not match the grammar. `position` is a 0-based
// character offset into the input.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : Error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// A query label with no binding in the scenario, or a binding of the wrong
// kind for its position in the expression.
struct BindingError : Error {
  using Error::Error;
};

// Query shape the evaluator refuses to guess about (e.g. a top-level
// alternative mixing sequences with bare labels).
struct StructureError : Error {
  using Error::Error;
};

struct ConditioningOnNullError : Error {
  using Error::Error;
};

// Effects exceed the identity beyond tolerance.
struct PovmViolationError : Error {
  using Error::Error;
};

// A quantity that must be real/bounded came out of numerical range by more
// than the configured tolerance; indicates a modeling bug, not float noise.
struct NumericalError : Error {
  using Error::Error;
};

struct ResourceError : Error {
  using Error::Error;
};

struct InvariantError : Error {
  using Error::Error;
};

}  // namespace seqmeas
