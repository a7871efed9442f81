#pragma once

// Embedded MILP solver: a bounded-variable revised primal simplex on a sparse
// LU basis factorization, driven by best-bound branch-and-bound.

#include "sppa/lp_problem.hpp"

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace sppa {

struct SolverConfig {
  double feas_tol = 1e-7;
  double int_tol = 1e-6;
  double rel_gap = 1e-6;
  /// Absolute gap below which a node is pruned regardless of rel_gap.
  double abs_gap = 1e-9;
  std::int64_t node_limit = 1'000'000;
  /// Wall-clock seconds; infinite by default.
  double time_limit = kInf;
  /// Pivots between basis refactorizations.
  int refactor_interval = 64;
  /// Replacement for infinite bounds on structural variables.
  double big_bound = 1e9;
  /// Keep (dual bound, incumbent) pairs for each node expansion.
  bool record_bound_trace = false;
};

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNodeLimit,   // incumbent available, search incomplete
  kTimeLimit,   // incumbent available, search incomplete
  kNoIncumbent, // limits hit before any integer-feasible point was found
  kNumericalError,
};

std::string_view to_string(SolveStatus status);

struct LpSolution {
  SolveStatus status = SolveStatus::kNumericalError;
  std::vector<double> values;
  double objective = 0.0;
  std::int64_t iterations = 0;

  bool has_point() const {
    return !values.empty() && (status == SolveStatus::kOptimal || status == SolveStatus::kNodeLimit ||
                               status == SolveStatus::kTimeLimit);
  }
};

struct MilpStats {
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double seconds = 0.0;
  /// (dual bound, incumbent objective) at each node expansion, in the
  /// problem's own sense. Filled when SolverConfig::record_bound_trace is set.
  std::vector<std::pair<double, double>> bound_trace;
};

struct MilpSolution : LpSolution {
  /// Proven bound on the optimum (lower for minimization, upper for
  /// maximization).
  double bound = 0.0;
  double gap = 0.0;
  MilpStats stats;
};

/// Solves the continuous relaxation; integrality flags are ignored.
LpSolution solve_lp(const LpProblem& problem, const SolverConfig& config = {});

/// Branch-and-bound over the integer variables. Branches on the most
/// fractional variable (lowest id on ties) and expands nodes in best-bound
/// order, deeper nodes first on ties.
MilpSolution solve_milp(const LpProblem& problem, const SolverConfig& config = {});

}  // namespace sppa
