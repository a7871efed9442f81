#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sppa {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using VarId = int;

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjSense { kMinimize, kMaximize };

/// Sparse affine expression sum_j c_j x_j + constant.
struct LinearExpr {
  std::vector<std::pair<VarId, double>> terms;
  double constant = 0.0;

  void add(VarId var, double coef) { terms.emplace_back(var, coef); }
  void add(const LinearExpr& other, double scale = 1.0);
  double value(std::span<const double> x) const;
  /// Merges duplicate ids, drops zero coefficients and sorts by id.
  void normalize();
};

struct LinearConstraint {
  std::string name;
  std::vector<std::pair<VarId, double>> coefficients;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;

  double activity(std::span<const double> x) const;
  /// Amount by which x violates the row; 0 when satisfied.
  double violation(std::span<const double> x) const;
};

struct VariableDef {
  std::string name;
  double lo = 0.0;
  double hi = kInf;
  bool integer = false;
};

/// Linear (mixed-integer) program: objective, rows, variable bounds and
/// integrality flags. Also serves as the SPPA iteration model.
class LpProblem {
 public:
  VarId add_variable(std::string name, double lo, double hi, bool integer = false);
  /// Normalizes the row; throws std::invalid_argument on non-finite data or
  /// unknown variable ids.
  void add_constraint(LinearConstraint row);
  void set_objective(LinearExpr objective, ObjSense sense);

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_integer() const;

  const VariableDef& var(VarId j) const { return vars_[j]; }
  VariableDef& var(VarId j) { return vars_[j]; }
  const std::vector<VariableDef>& vars() const { return vars_; }
  const std::vector<LinearConstraint>& rows() const { return rows_; }
  std::vector<LinearConstraint>& rows() { return rows_; }
  const LinearExpr& objective() const { return objective_; }
  ObjSense sense() const { return sense_; }

  double objective_value(std::span<const double> x) const { return objective_.value(x); }
  /// Largest row or bound violation of x.
  double max_violation(std::span<const double> x) const;

 private:
  std::vector<VariableDef> vars_;
  std::vector<LinearConstraint> rows_;
  LinearExpr objective_;
  ObjSense sense_ = ObjSense::kMinimize;
};

using MilpModel = LpProblem;

}  // namespace sppa
