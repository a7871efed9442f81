#include "sppa/lp_problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sppa {
namespace {

void merge_terms(std::vector<std::pair<VarId, double>>& terms) {
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    VarId id = terms[i].first;
    double sum = 0.0;
    for (; i < terms.size() && terms[i].first == id; ++i) sum += terms[i].second;
    if (sum != 0.0) terms[out++] = {id, sum};
  }
  terms.resize(out);
}

}  // namespace

void LinearExpr::add(const LinearExpr& other, double scale) {
  for (const auto& [var, coef] : other.terms) terms.emplace_back(var, coef * scale);
  constant += other.constant * scale;
}

double LinearExpr::value(std::span<const double> x) const {
  double v = constant;
  for (const auto& [var, coef] : terms) v += coef * x[var];
  return v;
}

void LinearExpr::normalize() { merge_terms(terms); }

double LinearConstraint::activity(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& [var, coef] : coefficients) v += coef * x[var];
  return v;
}

double LinearConstraint::violation(std::span<const double> x) const {
  const double a = activity(x);
  switch (sense) {
    case RowSense::kLessEqual: return std::max(0.0, a - rhs);
    case RowSense::kGreaterEqual: return std::max(0.0, rhs - a);
    case RowSense::kEqual: return std::abs(a - rhs);
  }
  return 0.0;
}

VarId LpProblem::add_variable(std::string name, double lo, double hi, bool integer) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw std::invalid_argument("variable '" + name + "' has invalid bounds");
  }
  vars_.push_back({std::move(name), lo, hi, integer});
  return static_cast<VarId>(vars_.size() - 1);
}

void LpProblem::add_constraint(LinearConstraint row) {
  if (!std::isfinite(row.rhs)) throw std::invalid_argument("row '" + row.name + "' has a non-finite rhs");
  for (const auto& [var, coef] : row.coefficients) {
    if (var < 0 || var >= num_vars()) throw std::invalid_argument("row '" + row.name + "' references an unknown variable");
    if (!std::isfinite(coef)) throw std::invalid_argument("row '" + row.name + "' has a non-finite coefficient");
  }
  merge_terms(row.coefficients);
  rows_.push_back(std::move(row));
}

void LpProblem::set_objective(LinearExpr objective, ObjSense sense) {
  for (const auto& [var, coef] : objective.terms) {
    if (var < 0 || var >= num_vars()) throw std::invalid_argument("objective references an unknown variable");
    if (!std::isfinite(coef)) throw std::invalid_argument("objective has a non-finite coefficient");
  }
  objective.normalize();
  objective_ = std::move(objective);
  sense_ = sense;
}

int LpProblem::num_integer() const {
  return static_cast<int>(std::count_if(vars_.begin(), vars_.end(), [](const auto& v) { return v.integer; }));
}

double LpProblem::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max({worst, vars_[j].lo - x[j], x[j] - vars_[j].hi});
  }
  for (const auto& row : rows_) worst = std::max(worst, row.violation(x));
  return worst;
}

}  // namespace sppa
