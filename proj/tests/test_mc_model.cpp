#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/properties.hpp"

#include "sppa/mc_model.hpp"
#include "sppa/milp.hpp"

#include <cmath>

using namespace sppa;
using Vec = Eigen::VectorXd;
using IV = Interval<double>;

namespace {

double square(const Vec& z) { return z[0] * z[0]; }
double product(const Vec& z) { return z[0] * z[1]; }

struct Fixture {
  LpProblem model;
  std::vector<VarId> z;
  McEncoding enc;
};

Fixture encode(const Grid<double>& g, const TermFunction& f) {
  Fixture fx;
  for (int k = 0; k < g.dims(); ++k) {
    const auto b = g.bounds(k);
    fx.z.push_back(fx.model.add_variable("x" + std::to_string(k), b.lo, b.hi));
  }
  fx.enc = encode_term(fx.model, g, fx.z, VertexTable(g, f), "t");
  return fx;
}

// Whether (z1, z2) satisfies the chain rows of simplex s with mu_s = 1.
bool chain_admits(const Grid<double>& g, const McVariables& vars, std::int64_t s, double z1, double z2) {
  const auto rows = encode_chain(g, vars);
  std::vector<double> x(static_cast<std::size_t>(vars.copies.back() + 1), 0.0);
  x[vars.mu[s]] = 1.0;
  x[vars.copy(s, 0)] = z1;
  x[vars.copy(s, 1)] = z2;
  for (const auto& row : rows) {
    bool mine = false;
    for (const auto& [v, c] : row.coefficients) mine |= v == vars.mu[s];
    if (mine && row.violation(x) > 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("encode_selection: one linking row per axis and one cardinality row") {
  {
    LpProblem m;
    const VarId x = m.add_variable("x", 0, 2);
    const auto g = build_grid<double>({IV{0, 2}}, {2});
    const auto vars = add_mc_variables(m, g, "t");
    const VarId zs[] = {x};
    const auto rows = encode_selection(g, zs, vars);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].coefficients.size() == 3);  // two copies and x itself
    CHECK(rows[0].sense == RowSense::kEqual);
    CHECK(rows[1].coefficients.size() == 2);
    CHECK(rows[1].rhs == 1.0);
    CHECK(vars.mu.size() == 2);
    CHECK(vars.copies.size() == 2);
  }
  {
    LpProblem m;
    const VarId x = m.add_variable("x", 0, 1), y = m.add_variable("y", 0, 1);
    const auto g = build_grid<double>({IV{0, 1}, IV{0, 1}}, {2, 2});
    const auto vars = add_mc_variables(m, g, "t");
    const VarId zs[] = {x, y};
    const auto rows = encode_selection(g, zs, vars);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].coefficients.size() == 9);
    CHECK(rows[1].coefficients.size() == 9);
    CHECK(rows[2].coefficients.size() == 8);
    CHECK(vars.mu.size() == 8);
    CHECK(vars.copies.size() == 16);
  }
}

TEST_CASE("fixing one binary pins the variables to that simplex's copies") {
  const auto g = build_grid<double>({IV{-1, 2}, IV{0, 4}}, {2, 2});
  for (std::int64_t s = 0; s < count_simplices(g); ++s) {
    Fixture fx = encode(g, product);
    fx.model.var(fx.enc.vars.mu[s]).lo = 1.0;
    LinearExpr obj;
    for (VarId c : fx.enc.vars.copies) obj.add(c, 1.0);
    obj.add(fx.z[0], -0.3);
    fx.model.set_objective(obj, ObjSense::kMaximize);
    const auto sol = solve_lp(fx.model);
    REQUIRE(sol.status == SolveStatus::kOptimal);
    for (std::int64_t other = 0; other < count_simplices(g); ++other) {
      if (other == s) continue;
      CHECK(sol.values[fx.enc.vars.mu[other]] == doctest::Approx(0.0));
      CHECK(sol.values[fx.enc.vars.copy(other, 0)] == doctest::Approx(0.0));
      CHECK(sol.values[fx.enc.vars.copy(other, 1)] == doctest::Approx(0.0));
    }
    CHECK(sol.values[fx.z[0]] == doctest::Approx(sol.values[fx.enc.vars.copy(s, 0)]));
    CHECK(sol.values[fx.z[1]] == doctest::Approx(sol.values[fx.enc.vars.copy(s, 1)]));
  }
}

TEST_CASE("encode_chain: an unselected simplex collapses to zero") {
  const auto g = build_grid<double>({IV{1, 3}, IV{-2, 5}}, {2, 1});
  Fixture fx = encode(g, product);
  fx.model.var(fx.enc.vars.mu[1]).hi = 0.0;
  for (int sense = 0; sense < 2; ++sense) {
    for (int k = 0; k < 2; ++k) {
      LinearExpr obj;
      obj.add(fx.enc.vars.copy(1, k), 1.0);
      fx.model.set_objective(obj, sense ? ObjSense::kMaximize : ObjSense::kMinimize);
      const auto sol = solve_lp(fx.model);
      REQUIRE(sol.status == SolveStatus::kOptimal);
      CHECK(sol.objective == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("encode_chain: unit square, step order (1,2) is the lower triangle") {
  LpProblem m;
  const auto g = build_grid<double>({IV{0, 1}, IV{0, 1}}, {1, 1});
  const auto vars = add_mc_variables(m, g, "t");
  // Simplex 0 steps x1 then x2; membership must equal 0 <= z2 <= z1 <= 1.
  for (double a = -0.25; a <= 1.25; a += 0.125) {
    for (double b = -0.25; b <= 1.25; b += 0.125) {
      const bool expected = 0.0 <= b && b <= a && a <= 1.0;
      CHECK(chain_admits(g, vars, 0, a, b) == expected);
    }
  }
}

TEST_CASE("encode_chain: cell [1,2]x[3,5], step order (2,1)") {
  LpProblem m;
  const Grid<double> g({{1.0, 2.0}, {3.0, 5.0}});
  const auto vars = add_mc_variables(m, g, "t");
  // Simplex 1 steps x2 first: 3 <= z2 <= 5 and 1 <= z1 <= 1 + (z2 - 3)/2.
  for (double a = 0.5; a <= 2.5; a += 0.125) {
    for (double b = 2.5; b <= 5.5; b += 0.125) {
      const bool expected = 3.0 <= b && b <= 5.0 && 1.0 <= a && a <= 1.0 + 0.5 * (b - 3.0);
      CHECK(chain_admits(g, vars, 1, a, b) == expected);
    }
  }
}

TEST_CASE("encode_term_value is exact for affine functions") {
  const auto g = build_grid<double>({IV{-2, 2}, IV{0, 3}}, {3, 2});
  auto affine = [](const Vec& z) { return 4.0 - 2.0 * z[0] + 0.5 * z[1]; };
  const double points[][2] = {{-2, 0}, {0.3, 2.9}, {1.7, 0.4}, {2, 3}, {-0.5, 1.5}};
  for (const auto& p : points) {
    Fixture fx = encode(g, affine);
    fx.model.var(fx.z[0]).lo = fx.model.var(fx.z[0]).hi = p[0];
    fx.model.var(fx.z[1]).lo = fx.model.var(fx.z[1]).hi = p[1];
    fx.model.set_objective(fx.enc.objective_expr, ObjSense::kMinimize);
    const auto sol = solve_milp(fx.model);
    REQUIRE(sol.status == SolveStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(affine(Vec{{p[0], p[1]}})));
  }
}

TEST_CASE("encode_term_value: z^2 on {0,1,2} and z1*z2 on the unit square") {
  const auto g1 = build_grid<double>({IV{0, 2}}, {2});
  for (const double z0 : {0.5, 1.5}) {
    Fixture fx = encode(g1, square);
    fx.model.add_constraint({"fix", {{fx.z[0], 1.0}}, RowSense::kEqual, z0});
    fx.model.set_objective(fx.enc.objective_expr, ObjSense::kMinimize);
    const auto sol = solve_milp(fx.model);
    REQUIRE(sol.status == SolveStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(eval_pwl(g1, square, Vec{{z0}})));
    CHECK(sol.objective == doctest::Approx(z0 == 0.5 ? 0.5 : 2.5));
  }

  const auto g2 = build_grid<double>({IV{0, 1}, IV{0, 1}}, {1, 1});
  Fixture fx = encode(g2, product);
  fx.model.add_constraint({"fx", {{fx.z[0], 1.0}}, RowSense::kEqual, 0.5});
  fx.model.add_constraint({"fy", {{fx.z[1], 1.0}}, RowSense::kEqual, 0.5});
  fx.model.set_objective(fx.enc.objective_expr, ObjSense::kMinimize);
  const auto sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(0.5));
}

TEST_CASE("minimizing the encoding finds the best grid vertex") {
  const auto g = build_grid<double>({IV{-1, 2}, IV{-1, 1}}, {3, 4});
  auto f = [](const Vec& z) { return std::pow(z[0] - 0.4, 2) + std::pow(z[1] + 0.3, 2) + 0.2 * z[0] * z[1]; };
  Fixture fx = encode(g, f);
  fx.model.set_objective(fx.enc.objective_expr, ObjSense::kMinimize);
  const auto sol = solve_milp(fx.model);
  REQUIRE(sol.status == SolveStatus::kOptimal);
  double best = kInf;
  for (double a : g.breakpoints(0)) {
    for (double b : g.breakpoints(1)) best = std::min(best, f(Vec{{a, b}}));
  }
  CHECK(sol.objective == doctest::Approx(best));
}

TEST_CASE("VertexTable reports the failing vertex") {
  const auto g = build_grid<double>({IV{-1, 1}}, {2});
  auto f = [](const Vec& z) { return std::log(z[0]); };
  try {
    VertexTable t(g, f);
    FAIL("expected an exception");
  } catch (const VertexEvaluationError& e) {
    CHECK(e.vertex()[0] <= 0.0);
    CHECK(std::string(e.what()).find("grid vertex") != std::string::npos);
  }
}

TEST_CASE("encoding and interpolation agree at random points") {
  const auto res = testing::mc_geometric_equivalence(3, 200);
  INFO(res.detail);
  CHECK(res.ok);
}
