#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ovp {

// Bad algorithm or generator parameters (epsilon out of range, ...).
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Protocol misuse of the online engine: duplicate arrival id, dimension
// mismatch, weight exceeding the declared slack.
struct ProtocolError : std::logic_error {
  using std::logic_error::logic_error;
};

// Offline solver size guard tripped.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unknown item / element id passed to an objective.
struct LookupError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Malformed instance file; carries the 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(uint64_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  uint64_t line;
};

// An internal invariant of the engine broke. Always a bug, never user error.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace ovp
