#pragma once

#include "sppa/milp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <chrono>
#include <cstdint>
#include <memory>
#include <vector>

namespace sppa::detail {

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper };

/// Basis snapshot: basic variable per row position plus the state of every
/// variable (structurals first, then one logical per row).
struct Basis {
  std::vector<int> head;
  std::vector<VarState> state;
};

struct Deadline {
  std::chrono::steady_clock::time_point end = std::chrono::steady_clock::time_point::max();

  static Deadline after(double seconds);
  bool expired() const { return std::chrono::steady_clock::now() >= end; }
};

/// Bounded-variable revised primal simplex. Rows are written as A x - s = 0
/// with one bounded logical s_i per row, so every variable carries a box and
/// the all-logical basis is always available as a starting point.
class SimplexEngine {
 public:
  SimplexEngine(const LpProblem& problem, const SolverConfig& config);
  ~SimplexEngine();

  int num_structural() const { return n_; }
  double lower(int j) const { return lo_[j]; }
  double upper(int j) const { return up_[j]; }
  void set_structural_bounds(int j, double lo, double hi);

  /// Runs phase 1 / phase 2 from `warm` (or the logical basis when null).
  /// Returns kOptimal, kInfeasible, kUnbounded, kTimeLimit or kNumericalError.
  SolveStatus solve(const Basis* warm, const Deadline& deadline);

  const Basis& basis() const { return basis_; }
  std::vector<double> structural_values() const;
  /// Objective in the problem's own sense, including its constant.
  double objective() const;
  std::int64_t iterations() const { return iterations_; }
  /// True when an optimal point rests on a substituted big bound.
  bool at_big_bound() const;

 private:
  using SparseMatrix = Eigen::SparseMatrix<double>;
  using Vector = Eigen::VectorXd;

  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // off-pivot nonzeros of w
  };

  void load_basis(const Basis* warm);
  void set_logical_basis();
  bool refactor();
  void compute_basic_values();
  Vector ftran(Vector rhs) const;
  Vector btran(Vector rhs) const;
  double column_dot(int j, const Vector& y) const;
  void column_into(int j, Vector& out) const;
  double nonbasic_value(int j) const;

  int n_ = 0;  // structurals
  int m_ = 0;  // rows kept after dropping empty ones
  SparseMatrix a_;  // m x n, column major
  std::vector<double> lo_, up_, cost_;
  std::vector<bool> capped_lo_, capped_hi_;
  double cost_scale_ = 1.0;
  double sign_ = 1.0;  // -1 for maximization
  double obj_constant_ = 0.0;
  bool trivially_infeasible_ = false;
  SolverConfig config_;

  Basis basis_;
  std::vector<double> x_;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu_;
  std::vector<Eta> etas_;
  std::int64_t iterations_ = 0;
};

}  // namespace sppa::detail
