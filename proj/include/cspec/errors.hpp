#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cspec {

// Base for every error the library raises on purpose. The C API maps each
// subclass to a distinct status code.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

// Malformed edge-list input; carries the 1-based line number when known.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

class DisconnectedError : public Error {
public:
  using Error::Error;
};

// An oracle was asked for a graph beyond its enumeration bound.
class SizeLimitError : public Error {
public:
  using Error::Error;
};

// Eigensolver non-convergence, zero degree, exponent out of range, ...
class NumericError : public Error {
public:
  using Error::Error;
};

// A vertex tried to broadcast a message wider than the per-message budget.
class BudgetViolationError : public Error {
public:
  BudgetViolationError(int vertex, std::int64_t round, int width_bits, int budget_bits)
      : Error("message budget violated: vertex " + std::to_string(vertex) + " at round " +
              std::to_string(round) + " sent " + std::to_string(width_bits) +
              " bits, budget " + std::to_string(budget_bits)),
        vertex_(vertex), round_(round), width_bits_(width_bits), budget_bits_(budget_bits) {}
  int vertex() const { return vertex_; }
  std::int64_t round() const { return round_; }
  int width_bits() const { return width_bits_; }
  int budget_bits() const { return budget_bits_; }

private:
  int vertex_;
  std::int64_t round_;
  int width_bits_;
  int budget_bits_;
};

// Every power-iteration instance degenerated even after restart waves.
class RestartExhaustedError : public Error {
public:
  using Error::Error;
};

class MaxRoundsError : public Error {
public:
  using Error::Error;
};

}  // namespace cspec
