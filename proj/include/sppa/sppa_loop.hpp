#pragma once

// The outer loop: build a piecewise-linear MILP over the current box, solve
// it, shrink the box around the incumbent, repeat.

#include "sppa/milp.hpp"
#include "sppa/problem.hpp"
#include "sppa/pwl.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sppa {

struct SppaConfig {
  int initial_n_pieces = 4;
  int n_pieces = 4;
  double contract_frac = 0.5;
  int max_iters = 60;
  double width_tol = 1e-8;  // relative to each variable's starting width
  double obj_stall_tol = 1e-9;
  int obj_stall_iters = 10;
  double time_limit = kInf;  // seconds for the whole run
  SolverConfig milp;

  /// Throws std::invalid_argument.
  void validate() const;
};

enum class Termination { kWidth, kStall, kMaxIters, kInfeasible, kTimeLimit, kSolverFailure };
std::string to_string(Termination t);

struct IterationRecord {
  int iter = 0;
  int pieces = 0;
  std::vector<Interval<double>> bounds;  // every variable, as used by this iteration
  std::vector<double> incumbent;
  double objective = 0.0;   // true objective at the incumbent
  double surrogate = 0.0;   // MILP objective
  double violation = 0.0;   // of the true constraints
  double max_width = 0.0;   // over contracted variables
  int binaries = 0;
  SolveStatus status = SolveStatus::kOptimal;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  double gap = 0.0;
  double seconds = 0.0;
};

struct SppaResult {
  std::vector<double> best_point;
  double best_objective = kInf;
  int best_iter = -1;
  std::vector<VarId> contracted;
  std::vector<IterationRecord> trace;
  Termination termination = Termination::kMaxIters;
  double seconds = 0.0;

  bool has_point() const { return best_iter >= 0; }
};

/// Shrinks `iv` to frac * width, centered on x where possible and otherwise
/// slid inward until flush with the violated end.
Interval<double> contract_bounds(const Interval<double>& iv, double x, double frac);

/// Breakpoints for one variable: evenly spaced, or snapped to distinct
/// integers when `integer` is set.
std::vector<double> axis_breakpoints(const Interval<double>& iv, int pieces, bool integer);

/// The MILP for one iteration. Variables 0..n-1 are the problem's own, with
/// `bounds`; each nonlinear term adds its multiple-choice encoding over the
/// variables of that term that still have positive width.
LpProblem build_iteration_model(const ProblemSpec& spec, const std::vector<Interval<double>>& bounds, int pieces);

using IterationCallback = std::function<void(const IterationRecord&)>;
SppaResult run(const ProblemSpec& spec, const SppaConfig& config, const IterationCallback& on_iteration = {});

}  // namespace sppa
