#pragma once

// A bounded optimization problem split into a linear part and a set of
// low-dimensional nonlinear terms, each living in the objective or in one row.

#include "sppa/expr.hpp"
#include "sppa/lp_problem.hpp"
#include "sppa/mc_model.hpp"

#include <string>
#include <vector>

namespace sppa {

struct NonlinearTerm {
  std::vector<VarId> vars;  // sorted global indices
  TermFunction f;           // takes the values of `vars`, in order
  ExprPtr expr;             // source expression over global indices, if any
  double coef = 1.0;
  int row = -1;             // -1 for the objective
};

struct ProblemSpec {
  std::string name;
  std::vector<VariableDef> variables;
  LinearExpr linear_objective;
  std::vector<LinearConstraint> linear_constraints;
  std::vector<NonlinearTerm> terms;
  ObjSense sense = ObjSense::kMinimize;

  int num_vars() const { return static_cast<int>(variables.size()); }
  std::vector<std::string> variable_names() const;

  /// True objective and row activities, nonlinear terms evaluated exactly.
  double objective(std::span<const double> x) const;
  double row_activity(int r, std::span<const double> x) const;
  double max_violation(std::span<const double> x) const;

  /// Variables appearing in at least one nonlinear term, sorted.
  std::vector<VarId> nonlinear_variables() const;

  /// Throws std::invalid_argument on duplicate names, bad indices, or a
  /// nonlinear-term variable without finite bounds.
  void validate() const;
};

/// The variable indices an expression term is evaluated at.
NonlinearTerm make_term(const ExprPtr& expr, double coef, int row);

/// Result of splitting an expression: affine summands collapse into
/// `linear`; the rest are grouped so that summands sharing a variable, or
/// touching variables forced together by `groups`, end up in one term.
struct Decomposition {
  LinearExpr linear;
  std::vector<ExprPtr> terms;
};
Decomposition decompose(const ExprPtr& expr, int num_vars, const std::vector<std::vector<VarId>>& groups = {});

/// Adds `expr` as the objective (row < 0) or into row `row`.
void add_expression(ProblemSpec& spec, const ExprPtr& expr, int row,
                    const std::vector<std::vector<VarId>>& groups = {});

}  // namespace sppa
