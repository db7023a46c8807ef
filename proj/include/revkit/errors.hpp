#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace revkit {

// Malformed input text. line is 1-based; col is 1-based or 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& what)
      : std::runtime_error(format(line, col, what)), line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  static std::string format(int line, int col, const std::string& what) {
    std::string s = "line " + std::to_string(line);
    if (col > 0) s += ", col " + std::to_string(col);
    return s + ": " + what;
  }
  int line_;
  int col_;
};

// Structurally well-formed input that violates a documented contract
// (bad width, mass not summing to 1, wiring collision, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A schedule step applied to a state outside its precondition.
class PreconditionViolation : public std::runtime_error {
 public:
  PreconditionViolation(int step, std::uint32_t state, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what),
        step_(step),
        state_(state) {}
  int step() const { return step_; }
  std::uint32_t state() const { return state_; }

 private:
  int step_;
  std::uint32_t state_;
};

// Two drivers shorted at different levels. Always a modelling bug in the
// circuit under simulation, never recoverable.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace revkit
