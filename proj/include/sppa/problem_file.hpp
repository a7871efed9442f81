#pragma once

// Plain-text problem files:
//
//   # comment
//   [variables]
//   x  -2  2
//   n   0  9  integer
//   [objective]
//   minimize (1 - x)^2 + 100*(n - x^2)^2
//   [constraints]
//   cap: x + n <= 4
//   x^2 + n >= 1
//   [groups]
//   x n
//
// Objective and constraint expressions may continue on following lines.
// Each [groups] line names variables that must share one nonlinear term.

#include "sppa/problem.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace sppa {

/// Line and column are 1-based.
class ProblemParseError : public std::runtime_error {
 public:
  ProblemParseError(const std::string& what, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        message_(what),
        line_(line),
        column_(column) {}
  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_, column_;
};

ProblemSpec parse_problem(const std::string& text, const std::string& name = "problem");
ProblemSpec read_problem_file(const std::string& path);

}  // namespace sppa
