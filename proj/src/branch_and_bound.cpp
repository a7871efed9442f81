#include "simplex_engine.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace sppa {
namespace {

struct BoundChange {
  int var;
  double lo;
  double hi;
};

struct Node {
  double bound;  // minimization form
  int depth;
  std::int64_t seq;
  std::vector<BoundChange> changes;  // cumulative from the root
  std::shared_ptr<const detail::Basis> warm;
};

// Best bound first; deeper first on ties; then creation order.
struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  }
};

}  // namespace

MilpSolution solve_milp(const LpProblem& problem, const SolverConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const auto deadline = detail::Deadline::after(config.time_limit);
  const double sign = problem.sense() == ObjSense::kMaximize ? -1.0 : 1.0;

  MilpSolution out;
  detail::SimplexEngine engine(problem, config);

  std::vector<int> int_vars;
  std::vector<double> root_lo, root_hi;
  for (int j = 0; j < problem.num_vars(); ++j) {
    if (!problem.var(j).integer) continue;
    const double lo = std::ceil(engine.lower(j) - config.int_tol);
    const double hi = std::floor(engine.upper(j) + config.int_tol);
    int_vars.push_back(j);
    root_lo.push_back(lo);
    root_hi.push_back(hi);
  }

  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out.stats.lp_iterations = engine.iterations();
    out.iterations = engine.iterations();
    return out;
  };

  double incumbent = kInf;  // minimization form
  std::vector<double> best;
  double pruned_bound = kInf;  // smallest bound discarded by the gap test
  auto gap_tol = [&](double inc) { return std::max(config.abs_gap, config.rel_gap * std::abs(inc)); };

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  std::int64_t seq = 0;
  open.push(Node{-kInf, 0, seq++, {}, nullptr});
  bool limit_hit = false;
  SolveStatus limit_status = SolveStatus::kNodeLimit;

  while (!open.empty()) {
    if (out.stats.nodes >= config.node_limit) {
      limit_hit = true;
      limit_status = SolveStatus::kNodeLimit;
      break;
    }
    if (deadline.expired()) {
      limit_hit = true;
      limit_status = SolveStatus::kTimeLimit;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - gap_tol(incumbent)) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }
    if (config.record_bound_trace) {
      out.stats.bound_trace.emplace_back(sign * node.bound, sign * incumbent);
    }

    for (std::size_t t = 0; t < int_vars.size(); ++t) {
      engine.set_structural_bounds(int_vars[t], root_lo[t], root_hi[t]);
    }
    for (const auto& c : node.changes) engine.set_structural_bounds(c.var, c.lo, c.hi);

    const SolveStatus lp_status = engine.solve(node.warm.get(), deadline);
    ++out.stats.nodes;
    if (lp_status == SolveStatus::kTimeLimit) {
      open.push(std::move(node));
      limit_hit = true;
      limit_status = SolveStatus::kTimeLimit;
      break;
    }
    if (lp_status == SolveStatus::kInfeasible) continue;
    if (lp_status == SolveStatus::kUnbounded || (lp_status == SolveStatus::kOptimal && engine.at_big_bound())) {
      if (node.depth == 0) return finish(SolveStatus::kUnbounded);
      continue;
    }
    if (lp_status != SolveStatus::kOptimal) {
      if (node.depth == 0) return finish(SolveStatus::kNumericalError);
      // The subtree stays unexplored; its parent bound still counts.
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }

    const double value = sign * engine.objective();
    if (value >= incumbent - gap_tol(incumbent)) {
      pruned_bound = std::min(pruned_bound, value);
      continue;
    }
    std::vector<double> x = engine.structural_values();

    int branch_var = -1;
    double branch_score = kInf;
    for (int j : int_vars) {
      const double frac = x[j] - std::floor(x[j]);
      if (frac <= config.int_tol || frac >= 1.0 - config.int_tol) continue;
      const double score = std::abs(frac - 0.5);
      if (score < branch_score) {
        branch_score = score;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      for (int j : int_vars) x[j] = std::round(x[j]);
      incumbent = value;
      best = std::move(x);
      continue;
    }

    auto warm = std::make_shared<const detail::Basis>(engine.basis());
    const double v = x[branch_var];
    const double lo = engine.lower(branch_var);
    const double hi = engine.upper(branch_var);
    Node down{value, node.depth + 1, seq++, node.changes, warm};
    down.changes.push_back({branch_var, lo, std::floor(v)});
    Node up{value, node.depth + 1, seq++, std::move(node.changes), warm};
    up.changes.push_back({branch_var, std::ceil(v), hi});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  double bound = std::min(incumbent, pruned_bound);
  if (limit_hit && !open.empty()) bound = std::min(bound, open.top().bound);

  if (!best.empty()) {
    out.values = std::move(best);
    out.objective = sign * incumbent;
    out.bound = sign * bound;
    out.gap = std::abs(incumbent - bound) / std::max(1.0, std::abs(incumbent));
    return finish(limit_hit ? limit_status : SolveStatus::kOptimal);
  }
  if (limit_hit) {
    out.bound = sign * bound;
    out.gap = kInf;
    return finish(SolveStatus::kNoIncumbent);
  }
  return finish(SolveStatus::kInfeasible);
}

}  // namespace sppa
