#pragma once

// Multiple-choice MILP encoding of a piecewise-linear function on a Kuhn
// triangulation: one binary per simplex, one disaggregated copy of every
// variable per simplex, chain rows pinning each copy to its simplex, and the
// interpolated function value as a linear expression.

#include "sppa/lp_problem.hpp"
#include "sppa/pwl.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sppa {

using TermFunction = std::function<double(const Eigen::VectorXd&)>;

/// Raised when a term cannot be evaluated at a grid vertex.
class VertexEvaluationError : public std::domain_error {
 public:
  VertexEvaluationError(const std::string& what, Eigen::VectorXd vertex)
      : std::domain_error(what), vertex_(std::move(vertex)) {}
  const Eigen::VectorXd& vertex() const { return vertex_; }

 private:
  Eigen::VectorXd vertex_;
};

/// Function values at every vertex of a grid, computed once.
class VertexTable {
 public:
  VertexTable(const Grid<double>& grid, const TermFunction& f);

  /// Value at the vertex with per-axis breakpoint indices `index`.
  double at(std::span<const int> index) const;
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }

 private:
  std::vector<int> stride_;
  std::vector<double> values_;
};

/// Variable ids of one encoding. Simplex s = cell * d! + perm_index, cells in
/// grid linear order and permutations lexicographic.
struct McVariables {
  int dims = 0;
  std::vector<VarId> mu;
  std::vector<VarId> copies;

  std::int64_t simplices() const { return static_cast<std::int64_t>(mu.size()); }
  VarId copy(std::int64_t s, int k) const { return copies[static_cast<std::size_t>(s * dims + k)]; }
};

struct McEncoding {
  McVariables vars;
  std::vector<LinearConstraint> link_constraints;
  /// Interpolated term value over mu/copy variables.
  LinearExpr objective_expr;
};

/// Adds the mu binaries and z copies for every simplex of `grid`. Copies are
/// bounded by [min(0, lo_k), max(0, hi_k)], which the chain rows tighten.
McVariables add_mc_variables(LpProblem& model, const Grid<double>& grid, std::string_view prefix);

/// Linking rows sum_s z_k^s = z_k (one per axis) and the cardinality row
/// sum_s mu_s = 1.
std::vector<LinearConstraint> encode_selection(const Grid<double>& grid, std::span<const VarId> z,
                                               const McVariables& vars);

/// Per simplex and axis: b_k^l mu <= z_k^s, and an upper bound that is
/// b_k^{l+1} mu for the first stepped axis, otherwise the previous axis's
/// scaled offset. Together they confine z^s to mu times the simplex.
std::vector<LinearConstraint> encode_chain(const Grid<double>& grid, const McVariables& vars);

/// sum_s [ mu_s f(b_0^s) + sum_k slope_k^s (z_k^s - mu_s b_k^l) ].
LinearExpr encode_term_value(const Grid<double>& grid, const McVariables& vars, const VertexTable& values);

/// All of the above, with the rows appended to `model`.
McEncoding encode_term(LpProblem& model, const Grid<double>& grid, std::span<const VarId> z,
                       const VertexTable& values, std::string_view prefix);

}  // namespace sppa
