#include "sppa/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace sppa {
namespace {

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

double term_value(const NonlinearTerm& t, std::span<const double> x) {
  Eigen::VectorXd local(static_cast<Eigen::Index>(t.vars.size()));
  for (std::size_t i = 0; i < t.vars.size(); ++i) local[static_cast<Eigen::Index>(i)] = x[t.vars[i]];
  return t.coef * t.f(local);
}

}  // namespace

std::vector<std::string> ProblemSpec::variable_names() const {
  std::vector<std::string> out;
  out.reserve(variables.size());
  for (const auto& v : variables) out.push_back(v.name);
  return out;
}

double ProblemSpec::objective(std::span<const double> x) const {
  double s = linear_objective.value(x);
  for (const auto& t : terms) {
    if (t.row < 0) s += term_value(t, x);
  }
  return s;
}

double ProblemSpec::row_activity(int r, std::span<const double> x) const {
  double s = linear_constraints[r].activity(x);
  for (const auto& t : terms) {
    if (t.row == r) s += term_value(t, x);
  }
  return s;
}

double ProblemSpec::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max({worst, variables[j].lo - x[j], x[j] - variables[j].hi});
  }
  for (int r = 0; r < static_cast<int>(linear_constraints.size()); ++r) {
    const auto& row = linear_constraints[r];
    const double a = row_activity(r, x);
    switch (row.sense) {
      case RowSense::kLessEqual: worst = std::max(worst, a - row.rhs); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, row.rhs - a); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(a - row.rhs)); break;
    }
  }
  return worst;
}

std::vector<VarId> ProblemSpec::nonlinear_variables() const {
  std::set<VarId> s;
  for (const auto& t : terms) s.insert(t.vars.begin(), t.vars.end());
  return {s.begin(), s.end()};
}

void ProblemSpec::validate() const {
  std::set<std::string> names;
  for (const auto& v : variables) {
    if (!names.insert(v.name).second) throw std::invalid_argument("duplicate variable '" + v.name + "'");
    if (v.lo > v.hi) throw std::invalid_argument("variable '" + v.name + "' has an empty range");
  }
  for (const auto& t : terms) {
    if (!t.f) throw std::invalid_argument("nonlinear term without an evaluator");
    if (t.row >= static_cast<int>(linear_constraints.size())) throw std::invalid_argument("nonlinear term targets a missing row");
    for (VarId j : t.vars) {
      if (j < 0 || j >= num_vars()) throw std::invalid_argument("nonlinear term references a missing variable");
      const auto& v = variables[j];
      if (!std::isfinite(v.lo) || !std::isfinite(v.hi)) {
        throw std::invalid_argument("variable '" + v.name + "' appears in a nonlinear term but is unbounded");
      }
    }
  }
}

NonlinearTerm make_term(const ExprPtr& expr, double coef, int row) {
  NonlinearTerm t;
  t.vars = expr_variables(*expr);
  t.expr = expr;
  t.coef = coef;
  t.row = row;
  const int width = t.vars.empty() ? 0 : t.vars.back() + 1;
  t.f = [expr, vars = t.vars, width](const Eigen::VectorXd& local) {
    std::vector<double> full(static_cast<std::size_t>(width), 0.0);
    for (std::size_t i = 0; i < vars.size(); ++i) full[vars[i]] = local[static_cast<Eigen::Index>(i)];
    return eval_expr(*expr, full);
  };
  return t;
}

Decomposition decompose(const ExprPtr& expr, int num_vars, const std::vector<std::vector<VarId>>& groups) {
  Decomposition out;
  DisjointSets sets(num_vars);
  for (const auto& g : groups) {
    for (std::size_t i = 1; i < g.size(); ++i) sets.unite(g[0], g[i]);
  }

  std::vector<std::pair<double, ExprPtr>> nonlinear;
  for (const auto& [sign, summand] : split_sum(expr)) {
    if (const auto affine = affine_form(*summand)) {
      for (const auto& [j, c] : affine->coef) out.linear.add(j, sign * c);
      out.linear.constant += sign * affine->constant;
      continue;
    }
    const auto vars = expr_variables(*summand);
    if (vars.empty()) throw std::invalid_argument("constant subexpression cannot be evaluated: " + print_expr(*summand));
    for (std::size_t i = 1; i < vars.size(); ++i) sets.unite(vars[0], vars[i]);
    nonlinear.emplace_back(sign, summand);
  }
  out.linear.normalize();

  // Terms are emitted in order of their first summand.
  std::vector<int> roots;
  std::vector<ExprPtr> sums;
  for (const auto& [sign, summand] : nonlinear) {
    const int root = sets.find(expr_variables(*summand).front());
    auto it = std::find(roots.begin(), roots.end(), root);
    if (it == roots.end()) {
      roots.push_back(root);
      sums.push_back(sign > 0 ? summand : make_node(ExprOp::kNeg, {summand}));
    } else {
      auto& acc = sums[static_cast<std::size_t>(it - roots.begin())];
      acc = make_node(sign > 0 ? ExprOp::kAdd : ExprOp::kSub, {acc, summand});
    }
  }
  out.terms = std::move(sums);
  return out;
}

void add_expression(ProblemSpec& spec, const ExprPtr& expr, int row, const std::vector<std::vector<VarId>>& groups) {
  Decomposition d = decompose(expr, spec.num_vars(), groups);
  if (row < 0) {
    spec.linear_objective.add(d.linear, 1.0);
    spec.linear_objective.normalize();
  } else {
    auto& r = spec.linear_constraints[row];
    for (const auto& [j, c] : d.linear.terms) r.coefficients.emplace_back(j, c);
    r.rhs -= d.linear.constant;
  }
  for (const auto& t : d.terms) spec.terms.push_back(make_term(t, 1.0, row));
}

}  // namespace sppa
