#pragma once

// Infix expressions over named variables: parsing, evaluation, printing,
// and the affine/sum splitting used to decompose objectives into terms.

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sppa {

enum class ExprOp { kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kExp, kSqrt, kAbs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprOp op = ExprOp::kConst;
  double value = 0.0;   // kConst
  std::string name;     // kVar, or a named constant such as "pi"
  int var = -1;         // kVar; -1 until resolved
  std::vector<ExprPtr> args;
};

/// Position is a 0-based offset into the parsed text.
class ExprParseError : public std::runtime_error {
 public:
  ExprParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), message_(what), position_(position) {}
  std::size_t position() const { return position_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

/// Raised by eval_expr; carries the printed subexpression that failed.
class ExprDomainError : public std::domain_error {
 public:
  ExprDomainError(const std::string& what, std::string subexpression)
      : std::domain_error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

ExprPtr make_const(double v);
ExprPtr make_var(std::string name, int index = -1);
ExprPtr make_node(ExprOp op, std::vector<ExprPtr> args);

/// Variables are left unresolved (index -1).
ExprPtr parse_expr(std::string_view text);
/// Resolves every identifier against `names`; unknown ones are a parse error.
ExprPtr parse_expr(std::string_view text, std::span<const std::string> names);

/// Looks variables up by resolved index.
double eval_expr(const Expr& e, std::span<const double> values);
double eval_expr(const Expr& e, const std::map<std::string, double>& values);

std::string print_expr(const Expr& e);
bool same_structure(const Expr& a, const Expr& b);

/// Sorted, unique resolved indices.
std::vector<int> expr_variables(const Expr& e);

/// Coefficients by resolved index plus a constant, if e is affine.
struct AffineForm {
  std::map<int, double> coef;
  double constant = 0.0;
};
std::optional<AffineForm> affine_form(const Expr& e);

/// Flattens the top-level +, - and unary minus into signed summands.
std::vector<std::pair<double, ExprPtr>> split_sum(const ExprPtr& e);

}  // namespace sppa
