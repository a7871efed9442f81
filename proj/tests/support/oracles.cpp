#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace sppa::testing {

Eigen::VectorXd barycentric(const Eigen::MatrixXd& vertices, const Eigen::VectorXd& z) {
  const int d = static_cast<int>(vertices.rows());
  Eigen::MatrixXd system(d + 1, d + 1);
  system.topRows(d) = vertices;
  system.row(d).setOnes();
  Eigen::VectorXd rhs(d + 1);
  rhs.head(d) = z;
  rhs[d] = 1.0;
  return system.fullPivLu().solve(rhs);
}

double interpolate(const Eigen::MatrixXd& vertices, const Eigen::VectorXd& values, const Eigen::VectorXd& z) {
  return barycentric(vertices, z).dot(values);
}

std::pair<double, Eigen::VectorXd> interpolating_plane(const Eigen::MatrixXd& vertices, const Eigen::VectorXd& values) {
  const int d = static_cast<int>(vertices.rows());
  // Rows [1, v_p^T] (nu, rho) = f(v_p).
  Eigen::MatrixXd system(d + 1, d + 1);
  system.col(0).setOnes();
  system.rightCols(d) = vertices.transpose();
  const Eigen::VectorXd coeffs = system.fullPivLu().solve(values);
  return {coeffs[0], coeffs.tail(d)};
}

EnumerationResult enumerate_integer_program(const LpProblem& problem, double tol) {
  const int n = problem.num_vars();
  std::vector<long> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    const auto& v = problem.var(j);
    if (!v.integer || !std::isfinite(v.lo) || !std::isfinite(v.hi)) {
      throw std::invalid_argument("enumerate_integer_program needs bounded integer variables only");
    }
    lo[j] = static_cast<long>(std::ceil(v.lo));
    hi[j] = static_cast<long>(std::floor(v.hi));
  }
  const bool maximize = problem.sense() == ObjSense::kMaximize;
  EnumerationResult best;
  std::vector<double> x(n);
  std::vector<long> cur(lo);
  for (int j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) return best;
  }
  for (;;) {
    for (int j = 0; j < n; ++j) x[j] = static_cast<double>(cur[j]);
    bool ok = true;
    for (const auto& row : problem.rows()) {
      double a = 0.0;
      for (const auto& [var, coef] : row.coefficients) a += coef * x[var];
      if ((row.sense == RowSense::kLessEqual && a > row.rhs + tol) ||
          (row.sense == RowSense::kGreaterEqual && a < row.rhs - tol) ||
          (row.sense == RowSense::kEqual && std::abs(a - row.rhs) > tol)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      double obj = problem.objective().constant;
      for (const auto& [var, coef] : problem.objective().terms) obj += coef * x[var];
      if (!best.feasible || (maximize ? obj > best.objective : obj < best.objective)) {
        best = {true, obj, x};
      }
    }
    int j = 0;
    for (; j < n; ++j) {
      if (cur[j] < hi[j]) {
        ++cur[j];
        break;
      }
      cur[j] = lo[j];
    }
    if (j == n) break;
  }
  return best;
}

LpProblem random_binary_program(std::mt19937_64& rng, int vars, int rows) {
  std::uniform_int_distribution<int> coef(-9, 9);
  LpProblem p;
  for (int j = 0; j < vars; ++j) p.add_variable("b" + std::to_string(j), 0.0, 1.0, true);
  for (int i = 0; i < rows; ++i) {
    LinearConstraint row;
    row.name = "r" + std::to_string(i);
    double positive = 0.0;
    for (int j = 0; j < vars; ++j) {
      const int c = coef(rng);
      if (c != 0) row.coefficients.emplace_back(j, c);
      if (c > 0) positive += c;
    }
    if (row.coefficients.empty()) row.coefficients.emplace_back(0, 1.0);
    row.sense = RowSense::kLessEqual;
    // Right-hand sides around half the positive mass keep most instances feasible.
    row.rhs = std::floor(positive * std::uniform_real_distribution<double>(0.1, 0.7)(rng)) -
              std::uniform_int_distribution<int>(0, 3)(rng);
    p.add_constraint(std::move(row));
  }
  LinearExpr obj;
  for (int j = 0; j < vars; ++j) obj.add(j, coef(rng));
  p.set_objective(std::move(obj), rng() % 2 ? ObjSense::kMaximize : ObjSense::kMinimize);
  return p;
}

}  // namespace sppa::testing
