#include "simplex_engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace sppa {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNodeLimit: return "node_limit";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kNoIncumbent: return "no_incumbent";
    case SolveStatus::kNumericalError: return "numerical_error";
  }
  return "unknown";
}

namespace detail {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr int kMaxRecoveries = 3;

}  // namespace

Deadline Deadline::after(double seconds) {
  if (!std::isfinite(seconds)) return {};
  const auto span = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(std::max(0.0, seconds)));
  return {std::chrono::steady_clock::now() + span};
}

SimplexEngine::SimplexEngine(const LpProblem& problem, const SolverConfig& config) : config_(config) {
  n_ = problem.num_vars();

  std::vector<const LinearConstraint*> kept;
  for (const auto& row : problem.rows()) {
    if (!row.coefficients.empty()) {
      kept.push_back(&row);
      continue;
    }
    const double tol = config_.feas_tol;
    const bool ok = (row.sense == RowSense::kLessEqual && 0.0 <= row.rhs + tol) ||
                    (row.sense == RowSense::kGreaterEqual && 0.0 >= row.rhs - tol) ||
                    (row.sense == RowSense::kEqual && std::abs(row.rhs) <= tol);
    if (!ok) trivially_infeasible_ = true;
  }
  m_ = static_cast<int>(kept.size());

  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < m_; ++i) {
    for (const auto& [var, coef] : kept[i]->coefficients) triplets.emplace_back(i, var, coef);
  }
  a_.resize(m_, n_);
  a_.setFromTriplets(triplets.begin(), triplets.end());
  a_.makeCompressed();

  const int total = n_ + m_;
  lo_.assign(total, 0.0);
  up_.assign(total, 0.0);
  cost_.assign(total, 0.0);
  capped_lo_.assign(n_, false);
  capped_hi_.assign(n_, false);
  bool warned = false;
  for (int j = 0; j < n_; ++j) {
    const auto& v = problem.var(j);
    lo_[j] = v.lo;
    up_[j] = v.hi;
    if (!std::isfinite(lo_[j])) {
      lo_[j] = -config_.big_bound;
      capped_lo_[j] = true;
    }
    if (!std::isfinite(up_[j])) {
      up_[j] = config_.big_bound;
      capped_hi_[j] = true;
    }
    if ((capped_lo_[j] || capped_hi_[j]) && !warned) {
      std::cerr << "warning: unbounded variable '" << v.name << "' capped at +/-" << config_.big_bound << "\n";
      warned = true;
    }
  }
  for (int i = 0; i < m_; ++i) {
    const auto& row = *kept[i];
    double lo = -kInf, hi = kInf;
    if (row.sense != RowSense::kGreaterEqual) hi = row.rhs;
    if (row.sense != RowSense::kLessEqual) lo = row.rhs;
    lo_[n_ + i] = lo;
    up_[n_ + i] = hi;
  }

  sign_ = problem.sense() == ObjSense::kMaximize ? -1.0 : 1.0;
  obj_constant_ = problem.objective().constant;
  for (const auto& [var, coef] : problem.objective().terms) {
    cost_[var] = sign_ * coef;
    cost_scale_ = std::max(cost_scale_, std::abs(coef));
  }
  x_.assign(total, 0.0);
  set_logical_basis();
}

SimplexEngine::~SimplexEngine() = default;

void SimplexEngine::set_structural_bounds(int j, double lo, double hi) {
  lo_[j] = lo;
  up_[j] = hi;
}

void SimplexEngine::set_logical_basis() {
  basis_.head.resize(m_);
  basis_.state.assign(n_ + m_, VarState::kAtLower);
  for (int i = 0; i < m_; ++i) {
    basis_.head[i] = n_ + i;
    basis_.state[n_ + i] = VarState::kBasic;
  }
  for (int j = 0; j < n_; ++j) {
    // Start at the bound nearer zero to keep the logical values small.
    if (std::abs(up_[j]) < std::abs(lo_[j])) basis_.state[j] = VarState::kAtUpper;
  }
}

double SimplexEngine::nonbasic_value(int j) const {
  if (basis_.state[j] == VarState::kAtUpper) return std::isfinite(up_[j]) ? up_[j] : lo_[j];
  return std::isfinite(lo_[j]) ? lo_[j] : up_[j];
}

void SimplexEngine::load_basis(const Basis* warm) {
  if (warm != nullptr && static_cast<int>(warm->head.size()) == m_ &&
      static_cast<int>(warm->state.size()) == n_ + m_) {
    basis_ = *warm;
  } else {
    set_logical_basis();
  }
  auto normalize_states = [this] {
    for (int j = 0; j < n_ + m_; ++j) {
      auto& s = basis_.state[j];
      if (s == VarState::kAtLower && !std::isfinite(lo_[j])) s = VarState::kAtUpper;
      if (s == VarState::kAtUpper && !std::isfinite(up_[j])) s = VarState::kAtLower;
    }
  };
  normalize_states();
  if (!refactor()) {
    set_logical_basis();
    normalize_states();
    refactor();
  }
  for (int j = 0; j < n_ + m_; ++j) {
    if (basis_.state[j] != VarState::kBasic) x_[j] = nonbasic_value(j);
  }
}

bool SimplexEngine::refactor() {
  etas_.clear();
  if (m_ == 0) return true;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m_) * 4);
  for (int r = 0; r < m_; ++r) {
    const int j = basis_.head[r];
    if (j < n_) {
      for (SparseMatrix::InnerIterator it(a_, j); it; ++it) triplets.emplace_back(it.row(), r, it.value());
    } else {
      triplets.emplace_back(j - n_, r, -1.0);
    }
  }
  SparseMatrix b(m_, m_);
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(b);
  lu_->factorize(b);
  return lu_->info() == Eigen::Success;
}

SimplexEngine::Vector SimplexEngine::ftran(Vector rhs) const {
  Vector v = lu_->solve(rhs);
  for (const auto& eta : etas_) {
    const double vr = v[eta.row] / eta.pivot;
    v[eta.row] = vr;
    if (vr == 0.0) continue;
    for (const auto& [i, wi] : eta.entries) v[i] -= wi * vr;
  }
  return v;
}

SimplexEngine::Vector SimplexEngine::btran(Vector rhs) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = rhs[it->row];
    for (const auto& [i, wi] : it->entries) s -= wi * rhs[i];
    rhs[it->row] = s / it->pivot;
  }
  return lu_->transpose().solve(rhs);
}

double SimplexEngine::column_dot(int j, const Vector& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (SparseMatrix::InnerIterator it(a_, j); it; ++it) s += it.value() * y[it.row()];
  return s;
}

void SimplexEngine::column_into(int j, Vector& out) const {
  out.setZero(m_);
  if (j >= n_) {
    out[j - n_] = -1.0;
    return;
  }
  for (SparseMatrix::InnerIterator it(a_, j); it; ++it) out[it.row()] = it.value();
}

void SimplexEngine::compute_basic_values() {
  if (m_ == 0) return;
  Vector rhs = Vector::Zero(m_);
  for (int j = 0; j < n_; ++j) {
    if (basis_.state[j] == VarState::kBasic || x_[j] == 0.0) continue;
    for (SparseMatrix::InnerIterator it(a_, j); it; ++it) rhs[it.row()] -= it.value() * x_[j];
  }
  for (int i = 0; i < m_; ++i) {
    if (basis_.state[n_ + i] != VarState::kBasic) rhs[i] += x_[n_ + i];
  }
  const Vector xb = ftran(std::move(rhs));
  for (int r = 0; r < m_; ++r) x_[basis_.head[r]] = xb[r];
}

SolveStatus SimplexEngine::solve(const Basis* warm, const Deadline& deadline) {
  if (trivially_infeasible_) return SolveStatus::kInfeasible;
  for (int j = 0; j < n_; ++j) {
    if (lo_[j] > up_[j] + config_.feas_tol) return SolveStatus::kInfeasible;
  }

  load_basis(warm);
  compute_basic_values();
  if (m_ == 0) {
    for (int j = 0; j < n_; ++j) {
      basis_.state[j] = cost_[j] < 0.0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[j] = nonbasic_value(j);
    }
    return SolveStatus::kOptimal;
  }

  const double tol = config_.feas_tol;
  const double dtol_phase2 = 1e-9 * cost_scale_;
  const std::int64_t max_iter = 50LL * (n_ + m_) + 10000;
  const int bland_after = std::max(200, m_ / 4);

  Vector cb(m_), col(m_);
  bool fresh = true;
  bool bland = false;
  int degenerate_run = 0;
  int recoveries = 0;
  std::int64_t local_iter = 0;

  auto recover = [&]() {
    ++recoveries;
    set_logical_basis();
    for (int j = 0; j < n_ + m_; ++j) {
      auto& s = basis_.state[j];
      if (s == VarState::kAtLower && !std::isfinite(lo_[j])) s = VarState::kAtUpper;
      if (s == VarState::kAtUpper && !std::isfinite(up_[j])) s = VarState::kAtLower;
      if (s != VarState::kBasic) x_[j] = nonbasic_value(j);
    }
    refactor();
    compute_basic_values();
    fresh = true;
  };

  for (;;) {
    if ((local_iter & 63) == 0 && deadline.expired()) return SolveStatus::kTimeLimit;
    if (local_iter > max_iter) return SolveStatus::kNumericalError;

    bool phase1 = false;
    for (int r = 0; r < m_; ++r) {
      const int j = basis_.head[r];
      if (x_[j] < lo_[j] - tol) {
        cb[r] = -1.0;
        phase1 = true;
      } else if (x_[j] > up_[j] + tol) {
        cb[r] = 1.0;
        phase1 = true;
      } else {
        cb[r] = 0.0;
      }
    }
    if (!phase1) {
      for (int r = 0; r < m_; ++r) cb[r] = cost_[basis_.head[r]];
    }
    const double dtol = phase1 ? 1e-9 : dtol_phase2;
    const Vector y = btran(cb);

    int q = -1;
    double best = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const VarState s = basis_.state[j];
      if (s == VarState::kBasic || lo_[j] == up_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - column_dot(j, y);
      const bool eligible = (s == VarState::kAtLower && d < -dtol) || (s == VarState::kAtUpper && d > dtol);
      if (!eligible) continue;
      if (bland) {
        q = j;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
      }
    }

    if (q < 0) {
      if (!fresh) {
        if (!refactor()) {
          if (recoveries >= kMaxRecoveries) return SolveStatus::kNumericalError;
          recover();
          continue;
        }
        compute_basic_values();
        fresh = true;
        continue;
      }
      return phase1 ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
    }

    const double dir = basis_.state[q] == VarState::kAtLower ? 1.0 : -1.0;
    column_into(q, col);
    const Vector w = ftran(col);

    // Bound each basic variable would hit moving at `rate` per unit step, or
    // NaN when it does not block.
    auto blocking_bound = [&](int j, double rate) {
      const double v = x_[j];
      if (rate > 0.0) {
        if (phase1 && v < lo_[j] - tol) return lo_[j];
        if (phase1 && v > up_[j] + tol) return std::nan("");
        return std::isfinite(up_[j]) ? up_[j] : std::nan("");
      }
      if (phase1 && v > up_[j] + tol) return up_[j];
      if (phase1 && v < lo_[j] - tol) return std::nan("");
      return std::isfinite(lo_[j]) ? lo_[j] : std::nan("");
    };

    int leave = -1;
    double theta = kInf;
    double leave_bound = 0.0;
    if (bland) {
      for (int r = 0; r < m_; ++r) {
        const double rate = -dir * w[r];
        if (std::abs(rate) < kPivotTol) continue;
        const int j = basis_.head[r];
        const double bound = blocking_bound(j, rate);
        if (std::isnan(bound)) continue;
        const double ratio = std::max(0.0, (bound - x_[j]) / rate);
        if (ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && leave >= 0 && j < basis_.head[leave])) {
          theta = ratio;
          leave = r;
          leave_bound = bound;
        }
      }
    } else {
      // Harris two-pass: relaxed minimum ratio, then the largest pivot under it.
      double theta_max = kInf;
      for (int r = 0; r < m_; ++r) {
        const double rate = -dir * w[r];
        if (std::abs(rate) < kPivotTol) continue;
        const int j = basis_.head[r];
        const double bound = blocking_bound(j, rate);
        if (std::isnan(bound)) continue;
        const double relaxed = rate > 0.0 ? bound + tol : bound - tol;
        theta_max = std::min(theta_max, (relaxed - x_[j]) / rate);
      }
      double best_pivot = 0.0;
      for (int r = 0; r < m_; ++r) {
        const double rate = -dir * w[r];
        if (std::abs(rate) < kPivotTol) continue;
        const int j = basis_.head[r];
        const double bound = blocking_bound(j, rate);
        if (std::isnan(bound)) continue;
        const double ratio = (bound - x_[j]) / rate;
        if (ratio <= theta_max && std::abs(rate) > best_pivot) {
          best_pivot = std::abs(rate);
          leave = r;
          theta = std::max(0.0, ratio);
          leave_bound = bound;
        }
      }
    }

    const double range = up_[q] - lo_[q];
    const bool flip = range <= theta;
    if (leave < 0 && !std::isfinite(range)) {
      return phase1 ? SolveStatus::kNumericalError : SolveStatus::kUnbounded;
    }
    if (flip) theta = range;

    ++iterations_;
    ++local_iter;
    if (theta <= 1e-12) {
      if (++degenerate_run > bland_after) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    if (theta != 0.0) {
      x_[q] += dir * theta;
      for (int r = 0; r < m_; ++r) {
        if (w[r] != 0.0) x_[basis_.head[r]] -= dir * theta * w[r];
      }
    }
    if (flip) {
      basis_.state[q] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
      x_[q] = dir > 0 ? up_[q] : lo_[q];
      fresh = false;
      continue;
    }

    const int out = basis_.head[leave];
    x_[out] = leave_bound;
    basis_.state[out] = leave_bound == up_[out] && leave_bound != lo_[out] ? VarState::kAtUpper : VarState::kAtLower;
    if (lo_[out] == up_[out]) basis_.state[out] = VarState::kAtLower;
    basis_.state[q] = VarState::kBasic;
    basis_.head[leave] = q;

    Eta eta{leave, w[leave], {}};
    for (int i = 0; i < m_; ++i) {
      if (i != leave && std::abs(w[i]) > kDropTol) eta.entries.emplace_back(i, w[i]);
    }
    etas_.push_back(std::move(eta));
    fresh = false;

    if (static_cast<int>(etas_.size()) >= config_.refactor_interval) {
      if (!refactor()) {
        if (recoveries >= kMaxRecoveries) return SolveStatus::kNumericalError;
        recover();
        continue;
      }
      compute_basic_values();
    }
  }
}

std::vector<double> SimplexEngine::structural_values() const { return {x_.begin(), x_.begin() + n_}; }

double SimplexEngine::objective() const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
  return sign_ * v + obj_constant_;
}

bool SimplexEngine::at_big_bound() const {
  const double eps = 1e-6 * config_.big_bound;
  for (int j = 0; j < n_; ++j) {
    if (capped_lo_[j] && x_[j] <= -config_.big_bound + eps) return true;
    if (capped_hi_[j] && x_[j] >= config_.big_bound - eps) return true;
  }
  return false;
}

}  // namespace detail

LpSolution solve_lp(const LpProblem& problem, const SolverConfig& config) {
  detail::SimplexEngine engine(problem, config);
  LpSolution out;
  out.status = engine.solve(nullptr, detail::Deadline::after(config.time_limit));
  out.iterations = engine.iterations();
  if (out.status == SolveStatus::kOptimal && engine.at_big_bound()) out.status = SolveStatus::kUnbounded;
  if (out.status == SolveStatus::kOptimal) {
    out.values = engine.structural_values();
    out.objective = engine.objective();
  }
  return out;
}

}  // namespace sppa
