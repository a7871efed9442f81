#pragma once

// Breakpoint grids over a hyperrectangle, their Kuhn triangulation (one
// simplex per vertex path from a cell origin to the opposite corner) and
// direct piecewise-linear interpolation on it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sppa {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct Interval {
  Scalar lo{};
  Scalar hi{};

  Scalar width() const { return hi - lo; }
  Scalar center() const { return lo + (hi - lo) / Scalar(2); }
  bool contains(Scalar x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool degenerate() const { return lo == hi; }
  bool valid() const { return std::isfinite(lo) && std::isfinite(hi) && lo <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Cell multi-index (l_1, ..., l_d) with 0 <= l_k < L_k.
struct SubrectIndex {
  std::vector<int> cell;

  friend bool operator==(const SubrectIndex&, const SubrectIndex&) = default;
  friend auto operator<=>(const SubrectIndex&, const SubrectIndex&) = default;
};

/// A Kuhn simplex: a cell plus the order in which coordinates are stepped
/// (0-based variable indices). perm[p] is the variable incremented at step p.
struct SimplexId {
  SubrectIndex subrect;
  std::vector<int> perm;

  friend bool operator==(const SimplexId&, const SimplexId&) = default;
  friend auto operator<=>(const SimplexId&, const SimplexId&) = default;
};

/// Affine function nu + rho^T z.
template <typename Scalar>
struct Hyperplane {
  Scalar nu{};
  VectorX<Scalar> rho;

  Scalar operator()(const VectorX<Scalar>& z) const { return nu + rho.dot(z); }
};

template <typename Scalar>
class Grid {
 public:
  Grid() = default;

  /// Takes per-variable breakpoint arrays; each must hold at least two
  /// strictly increasing finite values.
  explicit Grid(std::vector<std::vector<Scalar>> breakpoints) : breakpoints_(std::move(breakpoints)) {
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
      const auto& b = breakpoints_[k];
      if (b.size() < 2) {
        throw std::invalid_argument("grid axis " + std::to_string(k) + " needs at least one piece");
      }
      for (std::size_t l = 0; l < b.size(); ++l) {
        if (!std::isfinite(b[l])) {
          throw std::invalid_argument("grid axis " + std::to_string(k) + " has a non-finite breakpoint");
        }
        if (l > 0 && !(b[l - 1] < b[l])) {
          throw std::invalid_argument("grid axis " + std::to_string(k) + " breakpoints not strictly increasing");
        }
      }
    }
  }

  int dims() const { return static_cast<int>(breakpoints_.size()); }
  int pieces(int k) const { return static_cast<int>(breakpoints_[k].size()) - 1; }
  const std::vector<Scalar>& breakpoints(int k) const { return breakpoints_[k]; }
  Scalar breakpoint(int k, int l) const { return breakpoints_[k][l]; }
  Interval<Scalar> bounds(int k) const { return {breakpoints_[k].front(), breakpoints_[k].back()}; }
  Scalar spacing(int k, int l) const { return breakpoints_[k][l + 1] - breakpoints_[k][l]; }

  std::int64_t subrect_count() const {
    std::int64_t n = 1;
    for (int k = 0; k < dims(); ++k) n *= pieces(k);
    return n;
  }

  std::int64_t vertex_count() const {
    std::int64_t n = 1;
    for (int k = 0; k < dims(); ++k) n *= pieces(k) + 1;
    return n;
  }

  bool contains(const VectorX<Scalar>& z) const {
    if (z.size() != dims()) return false;
    for (int k = 0; k < dims(); ++k) {
      if (!bounds(k).contains(z[k])) return false;
    }
    return true;
  }

 private:
  std::vector<std::vector<Scalar>> breakpoints_;
};

/// Equally spaced breakpoints, endpoints exact.
template <typename Scalar>
Grid<Scalar> build_grid(std::span<const Interval<Scalar>> bounds, std::span<const int> pieces) {
  if (bounds.size() != pieces.size()) {
    throw std::invalid_argument("build_grid: bounds and pieces differ in length");
  }
  std::vector<std::vector<Scalar>> axes;
  axes.reserve(bounds.size());
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    const auto& iv = bounds[k];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw std::invalid_argument("build_grid: non-finite bound on axis " + std::to_string(k));
    }
    if (pieces[k] < 1) {
      throw std::invalid_argument("build_grid: axis " + std::to_string(k) + " needs at least one piece");
    }
    if (!(iv.lo < iv.hi)) {
      // Degenerate axes are fixed constants and must be removed by the caller.
      throw std::invalid_argument("build_grid: empty or degenerate interval on axis " + std::to_string(k));
    }
    const int count = pieces[k];
    std::vector<Scalar> axis(count + 1);
    const Scalar width = iv.hi - iv.lo;
    for (int l = 0; l <= count; ++l) axis[l] = iv.lo + width * Scalar(l) / Scalar(count);
    axis.front() = iv.lo;
    axis.back() = iv.hi;
    axes.push_back(std::move(axis));
  }
  return Grid<Scalar>(std::move(axes));
}

template <typename Scalar>
Grid<Scalar> build_grid(std::initializer_list<Interval<Scalar>> bounds, std::initializer_list<int> pieces) {
  return build_grid<Scalar>(std::span<const Interval<Scalar>>(bounds.begin(), bounds.size()),
                            std::span<const int>(pieces.begin(), pieces.size()));
}

inline std::int64_t factorial(int d) {
  std::int64_t f = 1;
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

template <typename Scalar>
std::int64_t count_simplices(const Grid<Scalar>& grid) {
  return factorial(grid.dims()) * grid.subrect_count();
}

/// All permutations of 0..d-1 in lexicographic order. Position j in this list
/// is the simplex index within a cell.
inline std::vector<std::vector<int>> kuhn_permutations(int d) {
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(factorial(d)));
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Step order of each variable: kappa[k] is the 0-based position of k in perm.
inline std::vector<int> step_order(std::span<const int> perm) {
  std::vector<int> kappa(perm.size());
  for (std::size_t p = 0; p < perm.size(); ++p) kappa[perm[p]] = static_cast<int>(p);
  return kappa;
}

/// Mixed-radix decoding of a linear cell index; the last variable varies
/// fastest.
template <typename Scalar>
SubrectIndex subrect_at(const Grid<Scalar>& grid, std::int64_t linear) {
  SubrectIndex idx{std::vector<int>(grid.dims())};
  for (int k = grid.dims() - 1; k >= 0; --k) {
    idx.cell[k] = static_cast<int>(linear % grid.pieces(k));
    linear /= grid.pieces(k);
  }
  return idx;
}

template <typename Scalar>
std::int64_t linear_index(const Grid<Scalar>& grid, const SubrectIndex& idx) {
  std::int64_t linear = 0;
  for (int k = 0; k < grid.dims(); ++k) linear = linear * grid.pieces(k) + idx.cell[k];
  return linear;
}

/// Calls fn(SimplexId) for every simplex: cells in linear order, permutations
/// lexicographic within each cell.
template <typename Scalar, typename Fn>
void for_each_simplex(const Grid<Scalar>& grid, Fn&& fn) {
  const auto perms = kuhn_permutations(grid.dims());
  const std::int64_t cells = grid.subrect_count();
  for (std::int64_t i = 0; i < cells; ++i) {
    SimplexId id{subrect_at(grid, i), {}};
    for (const auto& p : perms) {
      id.perm = p;
      fn(static_cast<const SimplexId&>(id));
    }
  }
}

template <typename Scalar>
SimplexId locate(const Grid<Scalar>& grid, const VectorX<Scalar>& z) {
  const int d = grid.dims();
  if (z.size() != d) throw std::invalid_argument("locate: point dimension mismatch");
  if (!grid.contains(z)) throw std::out_of_range("locate: point outside the grid");

  SimplexId id{SubrectIndex{std::vector<int>(d)}, std::vector<int>(d)};
  std::vector<Scalar> frac(d);
  for (int k = 0; k < d; ++k) {
    const auto& b = grid.breakpoints(k);
    int l = static_cast<int>(std::upper_bound(b.begin(), b.end(), z[k]) - b.begin()) - 1;
    l = std::clamp(l, 0, grid.pieces(k) - 1);
    id.subrect.cell[k] = l;
    frac[k] = (z[k] - b[l]) / (b[l + 1] - b[l]);
  }
  std::iota(id.perm.begin(), id.perm.end(), 0);
  std::stable_sort(id.perm.begin(), id.perm.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  return id;
}

/// Vertices of the simplex as columns of a d x (d+1) matrix. Column 0 is the
/// cell origin; column p steps coordinate perm[p-1] of column p-1 to its upper
/// breakpoint.
template <typename Scalar>
MatrixX<Scalar> simplex_vertices(const Grid<Scalar>& grid, const SimplexId& id) {
  const int d = grid.dims();
  MatrixX<Scalar> v(d, d + 1);
  for (int k = 0; k < d; ++k) v(k, 0) = grid.breakpoint(k, id.subrect.cell[k]);
  for (int p = 1; p <= d; ++p) {
    v.col(p) = v.col(p - 1);
    const int k = id.perm[p - 1];
    v(k, p) = grid.breakpoint(k, id.subrect.cell[k] + 1);
  }
  return v;
}

/// Interpolating plane of f over the simplex. The slope along variable k is the
/// difference of f across the path edge that steps k, divided by the cell
/// spacing in k.
template <typename Scalar, typename F>
Hyperplane<Scalar> hyperplane_coeffs(const Grid<Scalar>& grid, const SimplexId& id, F&& f) {
  const int d = grid.dims();
  const MatrixX<Scalar> v = simplex_vertices(grid, id);
  VectorX<Scalar> values(d + 1);
  for (int p = 0; p <= d; ++p) {
    values[p] = f(VectorX<Scalar>(v.col(p)));
    if (!std::isfinite(values[p])) {
      throw std::domain_error("hyperplane_coeffs: function is not finite at a simplex vertex");
    }
  }
  Hyperplane<Scalar> plane{Scalar(0), VectorX<Scalar>(d)};
  for (int p = 0; p < d; ++p) {
    const int k = id.perm[p];
    plane.rho[k] = (values[p + 1] - values[p]) / grid.spacing(k, id.subrect.cell[k]);
  }
  plane.nu = values[0] - plane.rho.dot(v.col(0));
  return plane;
}

template <typename Scalar, typename F>
Scalar eval_pwl(const Grid<Scalar>& grid, F&& f, const VectorX<Scalar>& z) {
  const SimplexId id = locate(grid, z);
  return hyperplane_coeffs(grid, id, f)(z);
}

}  // namespace sppa
