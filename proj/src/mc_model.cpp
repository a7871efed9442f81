#include "sppa/mc_model.hpp"

#include <cmath>
#include <sstream>

namespace sppa {
namespace {

std::string join(std::string_view prefix, std::string_view tag, std::int64_t s, int k = -1) {
  std::string out(prefix);
  out += '_';
  out += tag;
  out += std::to_string(s);
  if (k >= 0) {
    out += '_';
    out += std::to_string(k);
  }
  return out;
}

std::string format_point(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << ')';
  return os.str();
}

}  // namespace

VertexTable::VertexTable(const Grid<double>& grid, const TermFunction& f) {
  const int d = grid.dims();
  stride_.assign(d, 1);
  for (int k = d - 2; k >= 0; --k) stride_[k] = stride_[k + 1] * (grid.pieces(k + 1) + 1);
  values_.resize(static_cast<std::size_t>(grid.vertex_count()));

  Eigen::VectorXd v(d);
  std::vector<int> idx(d, 0);
  for (std::size_t lin = 0; lin < values_.size(); ++lin) {
    for (int k = 0; k < d; ++k) v[k] = grid.breakpoint(k, idx[k]);
    double value = 0.0;
    try {
      value = f(v);
    } catch (const std::exception& e) {
      throw VertexEvaluationError("term evaluation failed at grid vertex " + format_point(v) + ": " + e.what(), v);
    }
    if (!std::isfinite(value)) {
      throw VertexEvaluationError("term is not finite at grid vertex " + format_point(v), v);
    }
    values_[lin] = value;
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] <= grid.pieces(k)) break;
      idx[k] = 0;
    }
  }
}

double VertexTable::at(std::span<const int> index) const {
  std::size_t lin = 0;
  for (std::size_t k = 0; k < index.size(); ++k) lin += static_cast<std::size_t>(index[k]) * stride_[k];
  return values_[lin];
}

McVariables add_mc_variables(LpProblem& model, const Grid<double>& grid, std::string_view prefix) {
  McVariables vars;
  vars.dims = grid.dims();
  const std::int64_t count = count_simplices(grid);
  vars.mu.reserve(static_cast<std::size_t>(count));
  vars.copies.reserve(static_cast<std::size_t>(count * vars.dims));
  for (std::int64_t s = 0; s < count; ++s) vars.mu.push_back(model.add_variable(join(prefix, "mu", s), 0.0, 1.0, true));
  for (std::int64_t s = 0; s < count; ++s) {
    for (int k = 0; k < vars.dims; ++k) {
      const auto b = grid.bounds(k);
      vars.copies.push_back(model.add_variable(join(prefix, "z", s, k), std::min(0.0, b.lo), std::max(0.0, b.hi)));
    }
  }
  return vars;
}

std::vector<LinearConstraint> encode_selection(const Grid<double>& grid, std::span<const VarId> z,
                                               const McVariables& vars) {
  const int d = grid.dims();
  std::vector<LinearConstraint> rows;
  for (int k = 0; k < d; ++k) {
    LinearConstraint link{"link_" + std::to_string(k), {}, RowSense::kEqual, 0.0};
    link.coefficients.reserve(static_cast<std::size_t>(vars.simplices()) + 1);
    for (std::int64_t s = 0; s < vars.simplices(); ++s) link.coefficients.emplace_back(vars.copy(s, k), 1.0);
    link.coefficients.emplace_back(z[k], -1.0);
    rows.push_back(std::move(link));
  }
  LinearConstraint pick{"choose", {}, RowSense::kEqual, 1.0};
  for (VarId mu : vars.mu) pick.coefficients.emplace_back(mu, 1.0);
  rows.push_back(std::move(pick));
  return rows;
}

std::vector<LinearConstraint> encode_chain(const Grid<double>& grid, const McVariables& vars) {
  const int d = grid.dims();
  std::vector<LinearConstraint> rows;
  rows.reserve(static_cast<std::size_t>(vars.simplices() * 2 * d));
  std::int64_t s = 0;
  for_each_simplex(grid, [&](const SimplexId& id) {
    const VarId mu = vars.mu[s];
    for (int step = 0; step < d; ++step) {
      const int k = id.perm[step];
      const int l = id.subrect.cell[k];
      const double lo = grid.breakpoint(k, l);
      const VarId zk = vars.copy(s, k);

      rows.push_back({"lo" + std::to_string(s) + "_" + std::to_string(k), {{mu, lo}, {zk, -1.0}},
                      RowSense::kLessEqual, 0.0});
      LinearConstraint upper{"up" + std::to_string(s) + "_" + std::to_string(k), {}, RowSense::kLessEqual, 0.0};
      if (step == 0) {
        upper.coefficients = {{zk, 1.0}, {mu, -grid.breakpoint(k, l + 1)}};
      } else {
        const int p = id.perm[step - 1];
        const int lp = id.subrect.cell[p];
        const double ratio = grid.spacing(k, l) / grid.spacing(p, lp);
        upper.coefficients = {{zk, 1.0}, {vars.copy(s, p), -ratio}, {mu, ratio * grid.breakpoint(p, lp) - lo}};
      }
      rows.push_back(std::move(upper));
    }
    ++s;
  });
  return rows;
}

LinearExpr encode_term_value(const Grid<double>& grid, const McVariables& vars, const VertexTable& values) {
  const int d = grid.dims();
  LinearExpr expr;
  expr.terms.reserve(static_cast<std::size_t>(vars.simplices() * (d + 1)));
  std::vector<int> index(d);
  std::vector<double> path(d + 1);
  std::int64_t s = 0;
  for_each_simplex(grid, [&](const SimplexId& id) {
    index = id.subrect.cell;
    path[0] = values.at(index);
    for (int step = 0; step < d; ++step) {
      ++index[id.perm[step]];
      path[step + 1] = values.at(index);
    }
    double mu_coef = path[0];
    for (int step = 0; step < d; ++step) {
      const int k = id.perm[step];
      const int l = id.subrect.cell[k];
      const double slope = (path[step + 1] - path[step]) / grid.spacing(k, l);
      mu_coef -= slope * grid.breakpoint(k, l);
      expr.add(vars.copy(s, k), slope);
    }
    expr.add(vars.mu[s], mu_coef);
    ++s;
  });
  return expr;
}

McEncoding encode_term(LpProblem& model, const Grid<double>& grid, std::span<const VarId> z,
                       const VertexTable& values, std::string_view prefix) {
  if (static_cast<int>(z.size()) != grid.dims()) throw std::invalid_argument("encode_term: variable count mismatch");
  McEncoding enc;
  enc.vars = add_mc_variables(model, grid, prefix);
  enc.link_constraints = encode_selection(grid, z, enc.vars);
  auto chain = encode_chain(grid, enc.vars);
  enc.link_constraints.insert(enc.link_constraints.end(), std::make_move_iterator(chain.begin()),
                              std::make_move_iterator(chain.end()));
  for (auto row : enc.link_constraints) {
    row.name = std::string(prefix) + "_" + row.name;
    model.add_constraint(std::move(row));
  }
  enc.objective_expr = encode_term_value(grid, enc.vars, values);
  return enc;
}

}  // namespace sppa
