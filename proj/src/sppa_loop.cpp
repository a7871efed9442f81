#include "sppa/sppa_loop.hpp"

#include "sppa/mc_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace sppa {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool better(double a, double b, ObjSense sense) { return sense == ObjSense::kMinimize ? a < b : a > b; }

// Evaluates a term on the subset of its variables that still move; the rest
// are pinned at `fixed`.
TermFunction restrict_term(const NonlinearTerm& term, std::vector<int> free_slots, Eigen::VectorXd fixed) {
  return [&term, free_slots = std::move(free_slots), fixed = std::move(fixed)](const Eigen::VectorXd& z) {
    Eigen::VectorXd full = fixed;
    for (std::size_t i = 0; i < free_slots.size(); ++i) full[free_slots[i]] = z[static_cast<Eigen::Index>(i)];
    return term.f(full);
  };
}

std::string describe_vertex(const ProblemSpec& spec, const NonlinearTerm& term, const Eigen::VectorXd& full) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < term.vars.size(); ++i) {
    os << (i ? ", " : "") << spec.variables[term.vars[i]].name << " = " << full[static_cast<Eigen::Index>(i)];
  }
  return os.str();
}

Interval<double> contract_integer(const Interval<double>& iv, double x, double frac) {
  if (iv.width() <= 1.0) {
    const double v = std::clamp(std::round(x), iv.lo, iv.hi);
    return {v, v};
  }
  const Interval<double> c = contract_bounds(iv, x, frac);
  const Interval<double> out{std::max(iv.lo, std::floor(c.lo)), std::min(iv.hi, std::ceil(c.hi))};
  if (out.width() < iv.width()) return out;
  // Outward rounding undid the shrink ([6, 8] around 7 rounds back to [6, 8]).
  // Drop one integer instead, keeping round(x).
  const double w = iv.width() - 1.0;
  const double r = std::clamp(std::round(x), iv.lo, iv.hi);
  double lo = std::clamp(r - std::floor(w / 2.0), iv.lo, iv.hi - w);
  return {lo, lo + w};
}

}  // namespace

void SppaConfig::validate() const {
  if (initial_n_pieces < 1 || n_pieces < 1) throw std::invalid_argument("piece counts must be at least 1");
  if (!(contract_frac > 0.0 && contract_frac < 1.0)) throw std::invalid_argument("contract_frac must lie in (0, 1)");
  if (max_iters < 1 || obj_stall_iters < 1) throw std::invalid_argument("iteration counts must be at least 1");
  if (!(width_tol > 0.0) || !(obj_stall_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (!(time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kWidth: return "width";
    case Termination::kStall: return "stall";
    case Termination::kMaxIters: return "max_iters";
    case Termination::kInfeasible: return "infeasible";
    case Termination::kTimeLimit: return "time_limit";
    case Termination::kSolverFailure: return "solver_failure";
  }
  return "unknown";
}

Interval<double> contract_bounds(const Interval<double>& iv, double x, double frac) {
  x = std::clamp(x, iv.lo, iv.hi);
  const double w = frac * iv.width();
  double lo = x - 0.5 * w;
  double hi = x + 0.5 * w;
  if (lo < iv.lo) {
    lo = iv.lo;
    hi = iv.lo + w;
  } else if (hi > iv.hi) {
    hi = iv.hi;
    lo = iv.hi - w;
  }
  return {std::max(lo, iv.lo), std::min(hi, iv.hi)};
}

std::vector<double> axis_breakpoints(const Interval<double>& iv, int pieces, bool integer) {
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(pieces) + 1);
  for (int l = 0; l <= pieces; ++l) {
    double v = l == pieces ? iv.hi : iv.lo + iv.width() * l / pieces;
    if (integer) v = std::round(v);
    if (axis.empty() || v > axis.back()) axis.push_back(v);
  }
  return axis;
}

LpProblem build_iteration_model(const ProblemSpec& spec, const std::vector<Interval<double>>& bounds, int pieces) {
  if (static_cast<int>(bounds.size()) != spec.num_vars()) throw std::invalid_argument("one interval per variable");
  LpProblem model;
  for (int j = 0; j < spec.num_vars(); ++j) {
    const auto& v = spec.variables[j];
    model.add_variable(v.name, bounds[j].lo, bounds[j].hi, v.integer);
  }

  LinearExpr objective = spec.linear_objective;
  std::vector<LinearConstraint> rows = spec.linear_constraints;

  for (std::size_t t = 0; t < spec.terms.size(); ++t) {
    const NonlinearTerm& term = spec.terms[t];
    std::vector<int> free_slots;
    std::vector<VarId> free_vars;
    std::vector<std::vector<double>> axes;
    Eigen::VectorXd fixed(static_cast<Eigen::Index>(term.vars.size()));
    for (std::size_t i = 0; i < term.vars.size(); ++i) {
      const VarId j = term.vars[i];
      fixed[static_cast<Eigen::Index>(i)] = bounds[j].lo;
      auto axis = axis_breakpoints(bounds[j], pieces, spec.variables[j].integer);
      if (axis.size() < 2) continue;
      free_slots.push_back(static_cast<int>(i));
      free_vars.push_back(j);
      axes.push_back(std::move(axis));
    }

    LinearExpr value;
    if (free_vars.empty()) {
      double c = 0.0;
      try {
        c = term.f(fixed);
      } catch (const std::exception& e) {
        throw VertexEvaluationError("nonlinear term " + std::to_string(t) + " failed at " +
                                        describe_vertex(spec, term, fixed) + ": " + e.what(),
                                    fixed);
      }
      if (!std::isfinite(c)) {
        throw VertexEvaluationError("nonlinear term " + std::to_string(t) + " is not finite at " +
                                        describe_vertex(spec, term, fixed),
                                    fixed);
      }
      value.constant = c;
    } else {
      const Grid<double> grid(std::move(axes));
      const TermFunction f = restrict_term(term, free_slots, fixed);
      try {
        const VertexTable table(grid, f);
        value = encode_term(model, grid, free_vars, table, "t" + std::to_string(t)).objective_expr;
      } catch (const VertexEvaluationError& e) {
        Eigen::VectorXd full = fixed;
        for (std::size_t i = 0; i < free_slots.size(); ++i) {
          full[free_slots[i]] = e.vertex()[static_cast<Eigen::Index>(i)];
        }
        throw VertexEvaluationError("nonlinear term " + std::to_string(t) + " could not be evaluated at " +
                                        describe_vertex(spec, term, full) + " (" + e.what() + ")",
                                    full);
      }
    }

    if (term.row < 0) {
      objective.add(value, term.coef);
    } else {
      auto& row = rows[static_cast<std::size_t>(term.row)];
      for (const auto& [j, c] : value.terms) row.coefficients.emplace_back(j, term.coef * c);
      row.rhs -= term.coef * value.constant;
    }
  }

  for (auto& row : rows) model.add_constraint(std::move(row));
  objective.normalize();
  model.set_objective(std::move(objective), spec.sense);
  return model;
}

SppaResult run(const ProblemSpec& spec, const SppaConfig& config, const IterationCallback& on_iteration) {
  config.validate();
  spec.validate();
  const auto t0 = Clock::now();
  const int n = spec.num_vars();

  SppaResult result;
  result.contracted = spec.nonlinear_variables();

  std::vector<Interval<double>> bounds(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const auto& v = spec.variables[j];
    bounds[j] = v.integer ? Interval<double>{std::ceil(v.lo), std::floor(v.hi)} : Interval<double>{v.lo, v.hi};
    if (bounds[j].lo > bounds[j].hi) {
      result.termination = Termination::kInfeasible;
      return result;
    }
  }
  std::vector<double> start_width(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) start_width[j] = bounds[j].width();

  const double tol = config.milp.feas_tol * 10.0;
  bool best_feasible = false;
  double prev_objective = kNaN;
  int stalled = 0;

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const auto it0 = Clock::now();
    IterationRecord rec;
    rec.iter = iter;
    rec.pieces = iter == 0 ? config.initial_n_pieces : config.n_pieces;
    rec.bounds = bounds;
    for (VarId j : result.contracted) rec.max_width = std::max(rec.max_width, bounds[j].width());

    const LpProblem model = build_iteration_model(spec, bounds, rec.pieces);
    rec.binaries = model.num_integer() - static_cast<int>(std::count_if(
                                             spec.variables.begin(), spec.variables.end(),
                                             [](const VariableDef& v) { return v.integer; }));

    SolverConfig milp = config.milp;
    milp.time_limit = std::min(milp.time_limit, config.time_limit - since(t0));
    if (milp.time_limit <= 0.0) {
      result.termination = Termination::kTimeLimit;
      break;
    }
    const MilpSolution sol = solve_milp(model, milp);
    rec.status = sol.status;
    rec.nodes = sol.stats.nodes;
    rec.lp_iterations = sol.stats.lp_iterations;
    rec.gap = sol.gap;

    if (!sol.has_point()) {
      if (sol.status == SolveStatus::kInfeasible) {
        result.termination = Termination::kInfeasible;
      } else if (sol.status == SolveStatus::kTimeLimit || sol.status == SolveStatus::kNoIncumbent) {
        result.termination = since(t0) >= config.time_limit ? Termination::kTimeLimit : Termination::kSolverFailure;
      } else {
        result.termination = Termination::kSolverFailure;
      }
      break;
    }

    rec.incumbent.assign(sol.values.begin(), sol.values.begin() + n);
    for (int j = 0; j < n; ++j) {
      double& x = rec.incumbent[j];
      if (spec.variables[j].integer) x = std::round(x);
      x = std::clamp(x, bounds[j].lo, bounds[j].hi) + 0.0;  // no negative zeros in reports
    }
    rec.surrogate = sol.objective;
    try {
      rec.objective = spec.objective(rec.incumbent);
      rec.violation = spec.max_violation(rec.incumbent);
    } catch (const std::exception&) {
      rec.objective = kNaN;
      rec.violation = kInf;
    }
    rec.seconds = since(it0);

    const bool feasible = rec.violation <= tol;
    if (std::isfinite(rec.objective) &&
        (result.best_iter < 0 || (feasible && !best_feasible) ||
         (feasible == best_feasible && better(rec.objective, result.best_objective, spec.sense)))) {
      result.best_iter = iter;
      result.best_point = rec.incumbent;
      result.best_objective = rec.objective;
      best_feasible = feasible;
    }

    std::vector<Interval<double>> next = bounds;
    bool narrow = true;
    for (VarId j : result.contracted) {
      next[j] = spec.variables[j].integer ? contract_integer(bounds[j], rec.incumbent[j], config.contract_frac)
                                          : contract_bounds(bounds[j], rec.incumbent[j], config.contract_frac);
      narrow = narrow && next[j].width() <= config.width_tol * start_width[j];
    }

    stalled = std::abs(rec.objective - prev_objective) <= config.obj_stall_tol ? stalled + 1 : 0;
    prev_objective = rec.objective;

    result.trace.push_back(std::move(rec));
    if (on_iteration) on_iteration(result.trace.back());

    if (sol.status == SolveStatus::kTimeLimit || since(t0) >= config.time_limit) {
      result.termination = Termination::kTimeLimit;
      break;
    }
    if (narrow) {
      result.termination = Termination::kWidth;
      break;
    }
    if (stalled >= config.obj_stall_iters) {
      result.termination = Termination::kStall;
      break;
    }
    bounds = std::move(next);
    result.termination = Termination::kMaxIters;
  }
  result.seconds = since(t0);
  return result;
}

}  // namespace sppa
