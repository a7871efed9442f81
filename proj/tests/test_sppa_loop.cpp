#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/properties.hpp"

#include "sppa/builtins.hpp"
#include "sppa/problem_file.hpp"
#include "sppa/sppa_loop.hpp"

#include <cmath>

using namespace sppa;
using IV = Interval<double>;

namespace {

ProblemSpec one_variable(const std::string& expr, double lo, double hi, bool integer = false) {
  ProblemSpec spec;
  spec.variables.push_back({"z", lo, hi, integer});
  add_expression(spec, parse_expr(expr, spec.variable_names()), -1);
  return spec;
}

}  // namespace

TEST_CASE("contract_bounds: centering and translation") {
  auto same = [](IV a, IV b) { return a.lo == doctest::Approx(b.lo) && a.hi == doctest::Approx(b.hi); };
  CHECK(same(contract_bounds({0, 10}, 5.0, 0.5), {2.5, 7.5}));
  CHECK(same(contract_bounds({0, 10}, 9.5, 0.5), {5, 10}));
  CHECK(same(contract_bounds({0, 10}, 0.1, 0.5), {0, 5}));
  CHECK(same(contract_bounds({0, 10}, 10.0, 0.9), {1, 10}));
  CHECK(same(contract_bounds({-3, -1}, -2.0, 0.25), {-2.25, -1.75}));
  const IV c = contract_bounds({0, 10}, 9.5, 0.5);
  CHECK(c.hi == 10.0);
  CHECK(c.contains(9.5));
}

TEST_CASE("axis_breakpoints: even spacing and integer snapping") {
  CHECK(axis_breakpoints({0, 1}, 4, false) == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(axis_breakpoints({0, 10}, 4, true) == std::vector<double>{0, 3, 5, 8, 10});
  CHECK(axis_breakpoints({3, 5}, 4, true) == std::vector<double>{3, 4, 5});
  CHECK(axis_breakpoints({2, 2}, 3, false).size() == 1);
}

TEST_CASE("config validation") {
  SppaConfig c;
  CHECK_NOTHROW(c.validate());
  c.contract_frac = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.n_pieces = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.width_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("build_iteration_model: binary counts for the builtins") {
  auto binaries = [](const LpProblem& m) { return m.num_integer(); };
  const auto rb = builtin("rosenbrock");
  const std::vector<IV> box2(2, IV{-2.048, 2.048});
  CHECK(binaries(build_iteration_model(rb, box2, 4)) == 32);

  const auto ra = builtin("rastrigin");
  const std::vector<IV> box5(2, IV{-5.12, 5.12});
  CHECK(binaries(build_iteration_model(ra, box5, 6)) == 12);  // two terms of six
  CHECK(binaries(build_iteration_model(ra, box5, 3)) == 6);

  const auto eg = builtin("eggholder");
  const std::vector<IV> box512(2, IV{-512, 512});
  CHECK(binaries(build_iteration_model(eg, box512, 35)) == 2 * 35 * 35);
}

TEST_CASE("build_iteration_model: fixed variables drop out of a term") {
  const auto rb = builtin("rosenbrock");
  const LpProblem m = build_iteration_model(rb, {IV{0.5, 0.5}, IV{-1, 1}}, 4);
  CHECK(m.num_integer() == 4);  // one-dimensional term in y
  const LpProblem fixed = build_iteration_model(rb, {IV{0.5, 0.5}, IV{0.25, 0.25}}, 4);
  CHECK(fixed.num_integer() == 0);
  CHECK(fixed.objective().constant == doctest::Approx(0.25));
}

TEST_CASE("a problem without nonlinear terms is solved once") {
  const auto spec = parse_problem(
      "[variables]\nx 0 4\ny 0 4\n[objective]\nmaximize 3*x + 2*y\n[constraints]\nx + y <= 5\nx - y <= 1\n");
  const LpProblem m = build_iteration_model(spec, {IV{0, 4}, IV{0, 4}}, 4);
  CHECK(m.num_vars() == 2);
  CHECK(m.num_rows() == 2);
  const auto r = run(spec, {});
  REQUIRE(r.trace.size() == 1);
  CHECK(r.termination == Termination::kWidth);
  CHECK(r.best_objective == doctest::Approx(13.0));
}

TEST_CASE("z^2 on [-1, 1]: widths halve each iteration") {
  SppaConfig c;
  c.initial_n_pieces = c.n_pieces = 2;
  c.contract_frac = 0.5;
  c.obj_stall_iters = 100;  // z = 0 is a breakpoint from the start, so the objective never moves
  const auto r = run(one_variable("z^2", -1, 1), c);
  REQUIRE(r.trace.size() > 5);
  for (const auto& rec : r.trace) {
    CHECK(rec.bounds[0].width() == doctest::Approx(2.0 * std::pow(0.5, rec.iter)));
  }
  CHECK(r.termination == Termination::kWidth);
  CHECK(std::abs(r.best_point[0]) <= c.width_tol);
  CHECK(r.best_objective <= 1e-12);
}

TEST_CASE("the callback sees every iteration and the best is the trace minimum") {
  SppaConfig c;
  c.initial_n_pieces = 3;
  c.n_pieces = 3;
  c.max_iters = 15;
  std::vector<int> seen;
  const auto r = run(one_variable("sin(3*z) + 0.1*z^2", -4, 4), c, [&](const IterationRecord& rec) {
    seen.push_back(rec.iter);
  });
  REQUIRE(seen.size() == r.trace.size());
  double best = kInf;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    CHECK(seen[i] == static_cast<int>(i));
    best = std::min(best, r.trace[i].objective);
  }
  CHECK(r.best_objective == best);
}

TEST_CASE("integer variables keep integral breakpoints and end fixed") {
  const auto spec = parse_problem(
      "[variables]\nn 0 10 integer\nx -2 2\n[objective]\nminimize (n - 6.7)^2 + (x - 0.3)^2\n");
  SppaConfig c;
  c.initial_n_pieces = c.n_pieces = 3;
  const auto r = run(spec, c);
  REQUIRE(r.has_point());
  CHECK(r.best_point[0] == 7.0);
  // the stall test fires once the objective moves by under 1e-9, so x is only ~sqrt(1e-9) close
  CHECK(std::abs(r.best_point[1] - 0.3) <= 1e-4);
  CHECK(r.best_objective == doctest::Approx(0.09).epsilon(1e-8));
  for (const auto& rec : r.trace) {
    CHECK(rec.bounds[0].lo == std::floor(rec.bounds[0].lo));
    CHECK(rec.bounds[0].hi == std::floor(rec.bounds[0].hi));
    CHECK(rec.incumbent[0] == std::round(rec.incumbent[0]));
  }
  CHECK(r.trace.back().bounds[0].width() == 0.0);
}

TEST_CASE("z^2 on [-1, 1] with default stall settings stops on the flat objective") {
  SppaConfig c;
  c.initial_n_pieces = c.n_pieces = 2;
  const auto r = run(one_variable("z^2", -1, 1), c);
  CHECK(r.termination == Termination::kStall);
  CHECK(r.trace.size() == static_cast<std::size_t>(c.obj_stall_iters) + 1);
  CHECK(r.best_objective == 0.0);
}

TEST_CASE("nonlinear constraints: the convex disc is approached from inside") {
  const auto spec = parse_problem(
      "[variables]\nx -2 2\ny -2 2\n[objective]\nminimize -x - y\n[constraints]\ndisc: x^2 + y^2 <= 1\n");
  SppaConfig c;
  c.initial_n_pieces = c.n_pieces = 4;
  const auto r = run(spec, c);
  REQUIRE(r.has_point());
  CHECK(spec.max_violation(r.best_point) <= 1e-9);
  CHECK(r.best_objective <= -std::sqrt(2.0) + 1e-3);
}

TEST_CASE("infeasible first iteration") {
  const auto spec = parse_problem("[variables]\nx 0 1\n[objective]\nminimize x^2\n[constraints]\nx >= 2\n");
  const auto r = run(spec, {});
  CHECK(r.termination == Termination::kInfeasible);
  CHECK(r.trace.empty());
  CHECK_FALSE(r.has_point());
}

TEST_CASE("a term that fails at a grid vertex names the vertex") {
  const auto spec = one_variable("sqrt(z)", -1, 1);
  try {
    run(spec, {});
    FAIL("expected VertexEvaluationError");
  } catch (const VertexEvaluationError& e) {
    CHECK(std::string(e.what()).find("z = -1") != std::string::npos);
    CHECK(e.vertex()[0] == -1.0);
  }
}

TEST_CASE("time limit stops the loop") {
  SppaConfig c;
  c.initial_n_pieces = 35;
  c.n_pieces = 3;
  c.time_limit = 0.05;
  const auto r = run(builtin("eggholder"), c);
  CHECK(r.termination == Termination::kTimeLimit);
  CHECK(r.seconds < 5.0);
}

TEST_CASE("nesting and width law over random problems") {
  const auto res = testing::sppa_loop_properties(5, 50);
  INFO(res.detail);
  CHECK(res.ok);
  CHECK(res.cases == 50);
}
