#pragma once

#include <stdexcept>
#include <string>

namespace wristex {

// Input violates a numeric precondition (negative force, non-finite angle, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Model or toolkit configuration is incomplete or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fit or derivation has no unique answer (identical abscissae, zero slope).
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        source_(source),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

// Trial has too many invalid samples to be repaired by interpolation.
class TrialRejected : public std::runtime_error {
 public:
  TrialRejected(const std::string& what, double invalid_fraction)
      : std::runtime_error(what), invalid_fraction_(invalid_fraction) {}

  double invalid_fraction() const noexcept { return invalid_fraction_; }

 private:
  double invalid_fraction_;
};

}  // namespace wristex
