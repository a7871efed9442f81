#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support/properties.hpp"

#include "sppa/builtins.hpp"
#include "sppa/expr.hpp"
#include "sppa/problem_file.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace sppa;

namespace {

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

const std::vector<std::string> kXY{"x", "y"};

// Textbook definitions, written out independently of the registry.
double rosenbrock(double x, double y) { return (1 - x) * (1 - x) + 100 * (y - x * x) * (y - x * x); }
double rastrigin(double x, double y) {
  const double tau = 2 * std::numbers::pi;
  return 20 + (x * x - 10 * std::cos(tau * x)) + (y * y - 10 * std::cos(tau * y));
}
double ackley(double x, double y) {
  const double tau = 2 * std::numbers::pi;
  return -20 * std::exp(-0.2 * std::sqrt(0.5 * (x * x + y * y))) -
         std::exp(0.5 * (std::cos(tau * x) + std::cos(tau * y))) + std::numbers::e + 20;
}
double eggholder(double x, double y) {
  return -(y + 47) * std::sin(std::sqrt(std::abs(x / 2 + (y + 47)))) - x * std::sin(std::sqrt(std::abs(x - (y + 47))));
}

}  // namespace

TEST_CASE("parse_expr: grammar examples") {
  const auto e = parse_expr("x^2 + 100*(y - x^2)^2", kXY);
  CHECK(expr_variables(*e) == std::vector<int>{0, 1});

  const auto neg = parse_expr("-x^2");
  REQUIRE(neg->op == ExprOp::kNeg);
  CHECK(neg->args[0]->op == ExprOp::kPow);

  const auto right = parse_expr("a^b^c");
  REQUIRE(right->op == ExprOp::kPow);
  CHECK(right->args[1]->op == ExprOp::kPow);

  const auto left = parse_expr("a - b - c");
  REQUIRE(left->op == ExprOp::kSub);
  CHECK(left->args[0]->op == ExprOp::kSub);
}

TEST_CASE("parse_expr: errors carry positions") {
  auto position = [](const char* text, std::span<const std::string> names = {}) -> long {
    try {
      names.empty() ? parse_expr(text) : parse_expr(text, names);
    } catch (const ExprParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position("sin(x") == 5);
  CHECK(position("") == 0);
  CHECK(position("   ") == 3);
  CHECK(position("(x + 1))") == 7);
  CHECK(position("x + ") == 4);
  CHECK(position("x y") == 2);
  CHECK(position("foo(x)") == 0);
  CHECK(position("x + z", kXY) == 4);
  CHECK(position("2 * $") == 4);
}

TEST_CASE("eval_expr: fixture table") {
  const auto res = testing::expr_fixture_table();
  INFO(res.detail);
  CHECK(res.ok);
  CHECK(res.cases == 20);
  CHECK(eval_expr(*parse_expr("x^2 + y"), {{"x", 2.0}, {"y", 1.0}}) == 5.0);
}

TEST_CASE("eval_expr: domain errors") {
  const double xy[] = {1.0, 0.0};
  CHECK_THROWS_AS(eval_expr(*parse_expr("sqrt(-1)"), xy), ExprDomainError);
  CHECK_THROWS_AS(eval_expr(*parse_expr("x / y", kXY), xy), ExprDomainError);
  CHECK_THROWS_AS(eval_expr(*parse_expr("exp(1000)"), xy), ExprDomainError);
  CHECK_THROWS_AS(eval_expr(*parse_expr("(-8)^0.5"), xy), ExprDomainError);
  try {
    eval_expr(*parse_expr("x + sqrt(y - 2)", kXY), xy);
    FAIL("expected ExprDomainError");
  } catch (const ExprDomainError& e) {
    CHECK(e.subexpression() == "sqrt(y - 2)");
  }
}

TEST_CASE("eval_expr: eggholder optimum") {
  const auto e = parse_expr(builtin_info("eggholder").expression, kXY);
  const double at[] = {512.0, 404.2319};
  CHECK(std::abs(eval_expr(*e, at) - (-959.6407)) <= 1e-3);
}

TEST_CASE("print_expr uses minimal parentheses") {
  CHECK(print_expr(*parse_expr("((x^2)) + (100*((y - x^2)^2))")) == "x^2 + 100*(y - x^2)^2");
  CHECK(print_expr(*parse_expr("a - (b - c)")) == "a - (b - c)");
  CHECK(print_expr(*parse_expr("(a - b) - c")) == "a - b - c");
  CHECK(print_expr(*parse_expr("(-x)^2")) == "(-x)^2");
  CHECK(print_expr(*parse_expr("-(x^2)")) == "-x^2");
  CHECK(print_expr(*parse_expr("(a^b)^c")) == "(a^b)^c");
  CHECK(print_expr(*parse_expr("2^(-x)")) == "2^-x");
  CHECK(print_expr(*parse_expr("a/(b*c)")) == "a/(b*c)");
  CHECK(print_expr(*parse_expr("0.1 + pi")) == "0.1 + pi");
}

TEST_CASE("print then parse reproduces the tree") {
  const auto res = testing::expr_round_trip(11, 500);
  INFO(res.detail);
  CHECK(res.ok);
}

TEST_CASE("affine_form and split_sum") {
  const auto a = affine_form(*parse_expr("3*x - (y - 2)/4 + 2*pi", kXY));
  REQUIRE(a);
  CHECK(a->coef.at(0) == doctest::Approx(3));
  CHECK(a->coef.at(1) == doctest::Approx(-0.25));
  CHECK(a->constant == doctest::Approx(0.5 + 2 * std::numbers::pi));
  CHECK_FALSE(affine_form(*parse_expr("x*y", kXY)));
  CHECK_FALSE(affine_form(*parse_expr("x^2", kXY)));

  const auto parts = split_sum(parse_expr("a - (b + -c) - -d"));
  REQUIRE(parts.size() == 4);
  CHECK(parts[0].first == 1);
  CHECK(parts[1].first == -1);
  CHECK(parts[2].first == 1);
  CHECK(parts[3].first == 1);
}

TEST_CASE("builtins decompose into the expected terms") {
  const auto rb = builtin("rosenbrock");
  REQUIRE(rb.terms.size() == 1);
  CHECK(rb.terms[0].vars == std::vector<VarId>{0, 1});

  const auto ra = builtin("rastrigin");
  REQUIRE(ra.terms.size() == 2);
  CHECK(ra.terms[0].vars == std::vector<VarId>{0});
  CHECK(ra.terms[1].vars == std::vector<VarId>{1});
  CHECK(ra.linear_objective.constant == doctest::Approx(20));

  CHECK(builtin("ackley").terms.size() == 1);
  CHECK(builtin("eggholder").terms.size() == 1);
  CHECK_THROWS_AS(builtin("nosuch"), std::out_of_range);
}

TEST_CASE("builtins match textbook definitions at random points") {
  using Fn = double (*)(double, double);
  const std::pair<const char*, Fn> cases[] = {
      {"rosenbrock", rosenbrock}, {"rastrigin", rastrigin}, {"ackley", ackley}, {"eggholder", eggholder}};
  std::mt19937_64 rng(5);
  for (const auto& [name, fn] : cases) {
    const auto spec = builtin(name);
    const auto& info = builtin_info(name);
    std::uniform_real_distribution<double> u(info.lo, info.hi);
    for (int t = 0; t < 100; ++t) {
      const double p[] = {u(rng), u(rng)};
      CAPTURE(name);
      CHECK(close_rel(spec.objective(p), fn(p[0], p[1]), 1e-9));
    }
    const double at[] = {info.known_minimizer[0], info.known_minimizer[1]};
    CHECK(std::abs(spec.objective(at) - info.known_optimum) <= 1e-3);
  }
  const double one[] = {1.0, 1.0}, zero[] = {0.0, 0.0};
  CHECK(builtin("rosenbrock").objective(one) == 0.0);
  CHECK(std::abs(builtin("rastrigin").objective(zero)) <= 1e-12);
  CHECK(std::abs(builtin("ackley").objective(zero)) <= 1e-12);
}

TEST_CASE("problem files: sections, labels, integers and groups") {
  const std::string text =
      "# a small mixed problem\n"
      "[variables]\n"
      "x  -2  2\n"
      "y  -1  3\n"
      "n   0  5  integer\n"
      "w   0  inf\n"
      "[objective]\n"
      "minimize x^2 + y^2\n"
      "   + 3*n - w\n"
      "[constraints]\n"
      "cap: x + y + n <= 4\n"
      "x*y + w\n"
      "   >= 1 - n\n"
      "w <= 10\n";
  const auto spec = parse_problem(text);
  REQUIRE(spec.num_vars() == 4);
  CHECK(spec.variables[2].integer);
  CHECK(std::isinf(spec.variables[3].hi));
  CHECK(spec.sense == ObjSense::kMinimize);
  CHECK(spec.terms.size() == 3);  // x^2, y^2, x*y
  REQUIRE(spec.linear_constraints.size() == 3);
  CHECK(spec.linear_constraints[0].name == "cap");
  CHECK(spec.linear_constraints[1].sense == RowSense::kGreaterEqual);
  CHECK(spec.linear_constraints[1].rhs == doctest::Approx(1.0));

  const double p[] = {1.0, 2.0, 1.0, 0.5};
  CHECK(spec.objective(p) == doctest::Approx(1 + 4 + 3 - 0.5));
  CHECK(spec.row_activity(1, p) == doctest::Approx(1 * 2 + 0.5 + 1));
  CHECK(spec.max_violation(p) == doctest::Approx(0.0));

  const auto grouped = parse_problem(text + "[groups]\nx y\n");
  REQUIRE(grouped.terms.size() == 2);
  CHECK(grouped.terms[0].vars == std::vector<VarId>{0, 1});
  CHECK(grouped.objective(p) == doctest::Approx(spec.objective(p)));
}

TEST_CASE("problem files: errors carry line and column") {
  auto where = [](const std::string& text) -> std::pair<int, int> {
    try {
      parse_problem(text);
    } catch (const ProblemParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(where("[variables]\nx 0 1\n[objective]\nminimize sin(x\n") == std::pair{4, 15});
  CHECK(where("[variables]\nx 0 1\n[objective]\nminimize x + z\n") == std::pair{4, 14});
  CHECK(where("[variables]\nx 0 1\n") == std::pair{1, 1});
  CHECK(where("[variables]\nx 0 one\n[objective]\nmin x\n") == std::pair{2, 5});
  CHECK(where("[variables]\nx 0 1\n[objective]\nmin x\n[constraints]\nx + 1\n") == std::pair{6, 6});
  CHECK(where("[variables]\nx 0 inf\n[objective]\nmin x^2\n") == std::pair{4, 1});
  CHECK(where("[variables]\nx 0 1\nx 0 2\n[objective]\nmin x\n") == std::pair{3, 1});
  CHECK(where("[shapes]\n") == std::pair{1, 1});
  CHECK(where("x 0 1\n") == std::pair{1, 1});
}
