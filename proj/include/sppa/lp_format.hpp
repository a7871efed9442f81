#pragma once

// CPLEX-style LP text format: objective, Subject To, Bounds, Generals,
// Binaries, End.

#include "sppa/lp_problem.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace sppa {

class LpFormatError : public std::runtime_error {
 public:
  LpFormatError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Every variable gets an explicit bound line; integer variables with [0, 1]
/// bounds are listed under Binaries, other integers under Generals.
/// Names are sanitized to the LP identifier alphabet.
void write_lp(std::ostream& os, const LpProblem& problem);
std::string to_lp_string(const LpProblem& problem);

/// Reads the subset of the format written by write_lp plus the usual
/// variations (min/max abbreviations, `st`, `free`, one-sided bounds, `inf`).
/// Variables are numbered in order of first appearance.
LpProblem read_lp(std::istream& is);
LpProblem parse_lp(const std::string& text);

}  // namespace sppa
