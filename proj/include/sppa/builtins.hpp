#pragma once

// Benchmark registry: two-variable test functions with frozen domains and
// per-problem default piece counts.

#include "sppa/problem.hpp"

#include <string>
#include <vector>

namespace sppa {

struct BuiltinInfo {
  std::string name;
  std::string expression;
  double lo = 0.0, hi = 0.0;  // same box for both variables
  int initial_n_pieces = 0;
  int n_pieces = 0;
  double contract_frac = 0.5;
  double known_optimum = 0.0;
  std::vector<double> known_minimizer;
};

const std::vector<BuiltinInfo>& builtin_catalog();

/// Throws std::out_of_range for an unknown name.
const BuiltinInfo& builtin_info(const std::string& name);
ProblemSpec builtin(const std::string& name);

}  // namespace sppa
