#include "sppa/builtins.hpp"

#include <stdexcept>

namespace sppa {

const std::vector<BuiltinInfo>& builtin_catalog() {
  // Ackley uses a = 20, b = 0.2, c = 2*pi; the domains are the usual ones
  // from the global optimization literature. Eggholder needs a tighter
  // fraction: at 0.5 the 35/3 run settles in the -935 basin.
  static const std::vector<BuiltinInfo> catalog{
      {"rosenbrock", "(1 - x)^2 + 100*(y - x^2)^2", -2.048, 2.048, 4, 4, 0.5, 0.0, {1.0, 1.0}},
      {"rastrigin", "20 + x^2 + y^2 - 10*cos(2*pi*x) - 10*cos(2*pi*y)", -5.12, 5.12, 6, 3, 0.5, 0.0, {0.0, 0.0}},
      {"ackley", "-20*exp(-0.2*sqrt(0.5*(x^2 + y^2))) - exp(0.5*(cos(2*pi*x) + cos(2*pi*y))) + e + 20", -5.0, 5.0,
       3, 3, 0.5, 0.0, {0.0, 0.0}},
      {"eggholder", "-(y + 47)*sin(sqrt(abs(x/2 + y + 47))) - x*sin(sqrt(abs(x - (y + 47))))", -512.0, 512.0, 35, 3,
       0.3, -959.6407, {512.0, 404.2319}},
  };
  return catalog;
}

const BuiltinInfo& builtin_info(const std::string& name) {
  for (const auto& b : builtin_catalog()) {
    if (b.name == name) return b;
  }
  throw std::out_of_range("unknown builtin problem '" + name + "'");
}

ProblemSpec builtin(const std::string& name) {
  const BuiltinInfo& info = builtin_info(name);
  ProblemSpec spec;
  spec.name = info.name;
  spec.variables = {{"x", info.lo, info.hi, false}, {"y", info.lo, info.hi, false}};
  const auto names = spec.variable_names();
  add_expression(spec, parse_expr(info.expression, names), -1);
  spec.validate();
  return spec;
}

}  // namespace sppa
