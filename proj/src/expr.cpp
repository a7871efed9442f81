#include "sppa/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace sppa {
namespace {

int level(ExprOp op) {
  switch (op) {
    case ExprOp::kAdd:
    case ExprOp::kSub: return 1;
    case ExprOp::kMul:
    case ExprOp::kDiv: return 2;
    case ExprOp::kNeg: return 3;
    case ExprOp::kPow: return 4;
    default: return 5;
  }
}

const char* function_name(ExprOp op) {
  switch (op) {
    case ExprOp::kSin: return "sin";
    case ExprOp::kCos: return "cos";
    case ExprOp::kExp: return "exp";
    case ExprOp::kSqrt: return "sqrt";
    case ExprOp::kAbs: return "abs";
    default: return nullptr;
  }
}

std::optional<ExprOp> function_op(std::string_view name) {
  for (ExprOp op : {ExprOp::kSin, ExprOp::kCos, ExprOp::kExp, ExprOp::kSqrt, ExprOp::kAbs}) {
    if (name == function_name(op)) return op;
  }
  return std::nullopt;
}

std::optional<double> named_constant(std::string_view name) {
  if (name == "pi") return std::numbers::pi;
  if (name == "e") return std::numbers::e;
  return std::nullopt;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Recursive descent, one method per precedence level:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := atom ('^' unary)?          (right associative)
class Parser {
 public:
  Parser(std::string_view text, const std::span<const std::string>* names) : text_(text), names_(names) {}

  ExprPtr run() {
    skip();
    if (pos_ == text_.size()) throw ExprParseError("empty expression", pos_);
    ExprPtr e = sum();
    skip();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')') throw ExprParseError("unmatched ')'", pos_);
      throw ExprParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr sum() {
    ExprPtr e = product();
    for (;;) {
      if (accept('+')) {
        e = make_node(ExprOp::kAdd, {e, product()});
      } else if (accept('-')) {
        e = make_node(ExprOp::kSub, {e, product()});
      } else {
        return e;
      }
    }
  }

  ExprPtr product() {
    ExprPtr e = unary();
    for (;;) {
      if (accept('*')) {
        e = make_node(ExprOp::kMul, {e, unary()});
      } else if (accept('/')) {
        e = make_node(ExprOp::kDiv, {e, unary()});
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_node(ExprOp::kNeg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (accept('^')) return make_node(ExprOp::kPow, {base, unary()});
    return base;
  }

  ExprPtr atom() {
    skip();
    if (pos_ == text_.size()) throw ExprParseError("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (ident_start(c)) return identifier();
    if (c == '(') {
      ++pos_;
      ExprPtr inner = sum();
      if (!accept(')')) throw ExprParseError("expected ')'", pos_);
      return inner;
    }
    throw ExprParseError(std::string("unexpected '") + c + "'", pos_);
  }

  ExprPtr number() {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) throw ExprParseError("malformed number", pos_);
    pos_ = static_cast<std::size_t>(end - text_.data());
    return make_const(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const auto op = function_op(name);
      if (!op) throw ExprParseError("unknown function '" + name + "'", start);
      ++pos_;
      ExprPtr arg = sum();
      if (!accept(')')) throw ExprParseError("expected ')'", pos_);
      return make_node(*op, {arg});
    }
    if (names_) {
      const auto& names = *names_;
      const auto it = std::find(names.begin(), names.end(), name);
      if (it != names.end()) return make_var(name, static_cast<int>(it - names.begin()));
    }
    if (const auto c = named_constant(name)) {
      auto node = std::make_shared<Expr>();
      node->value = *c;
      node->name = name;
      return node;
    }
    if (names_) throw ExprParseError("unknown identifier '" + name + "'", start);
    return make_var(name);
  }

  std::string_view text_;
  const std::span<const std::string>* names_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, int min_level, std::string& out) {
  const bool negative_literal = child.op == ExprOp::kConst && child.name.empty() && std::signbit(child.value);
  const bool wrap = level(child.op) < min_level || negative_literal;
  if (wrap) out += '(';
  print_into(child, out);
  if (wrap) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  switch (e.op) {
    case ExprOp::kConst: out += e.name.empty() ? format_number(e.value) : e.name; return;
    case ExprOp::kVar: out += e.name; return;
    case ExprOp::kAdd:
    case ExprOp::kSub:
      print_child(*e.args[0], 1, out);
      out += e.op == ExprOp::kAdd ? " + " : " - ";
      print_child(*e.args[1], 2, out);
      return;
    case ExprOp::kMul:
    case ExprOp::kDiv:
      print_child(*e.args[0], 2, out);
      out += e.op == ExprOp::kMul ? '*' : '/';
      print_child(*e.args[1], 3, out);
      return;
    case ExprOp::kNeg:
      out += '-';
      print_child(*e.args[0], 3, out);
      return;
    case ExprOp::kPow:
      print_child(*e.args[0], 5, out);
      out += '^';
      print_child(*e.args[1], 3, out);
      return;
    default:
      out += function_name(e.op);
      out += '(';
      print_into(*e.args[0], out);
      out += ')';
      return;
  }
}

template <class Lookup>
double eval_with(const Expr& e, const Lookup& lookup) {
  auto fail = [&](const std::string& why) -> double { throw ExprDomainError(why, print_expr(e)); };
  double r = 0.0;
  switch (e.op) {
    case ExprOp::kConst: return e.value;
    case ExprOp::kVar: r = lookup(e); break;
    case ExprOp::kAdd: r = eval_with(*e.args[0], lookup) + eval_with(*e.args[1], lookup); break;
    case ExprOp::kSub: r = eval_with(*e.args[0], lookup) - eval_with(*e.args[1], lookup); break;
    case ExprOp::kMul: r = eval_with(*e.args[0], lookup) * eval_with(*e.args[1], lookup); break;
    case ExprOp::kDiv: {
      const double num = eval_with(*e.args[0], lookup);
      const double den = eval_with(*e.args[1], lookup);
      if (den == 0.0) return fail("division by zero");
      r = num / den;
      break;
    }
    case ExprOp::kPow: r = std::pow(eval_with(*e.args[0], lookup), eval_with(*e.args[1], lookup)); break;
    case ExprOp::kNeg: return -eval_with(*e.args[0], lookup);
    case ExprOp::kSin: r = std::sin(eval_with(*e.args[0], lookup)); break;
    case ExprOp::kCos: r = std::cos(eval_with(*e.args[0], lookup)); break;
    case ExprOp::kExp: r = std::exp(eval_with(*e.args[0], lookup)); break;
    case ExprOp::kSqrt: {
      const double a = eval_with(*e.args[0], lookup);
      if (a < 0.0) return fail("square root of a negative number");
      r = std::sqrt(a);
      break;
    }
    case ExprOp::kAbs: r = std::abs(eval_with(*e.args[0], lookup)); break;
  }
  if (!std::isfinite(r)) return fail("non-finite result");
  return r;
}

void collect(const Expr& e, std::set<int>& out) {
  if (e.op == ExprOp::kVar && e.var >= 0) out.insert(e.var);
  for (const auto& a : e.args) collect(*a, out);
}

bool has_variables(const Expr& e) {
  if (e.op == ExprOp::kVar) return true;
  return std::any_of(e.args.begin(), e.args.end(), [](const ExprPtr& a) { return has_variables(*a); });
}

void scale(AffineForm& f, double s) {
  for (auto& [k, c] : f.coef) c *= s;
  f.constant *= s;
}

}  // namespace

ExprPtr make_const(double v) {
  auto e = std::make_shared<Expr>();
  e->value = v;
  return e;
}

ExprPtr make_var(std::string name, int index) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::kVar;
  e->name = std::move(name);
  e->var = index;
  return e;
}

ExprPtr make_node(ExprOp op, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = std::move(args);
  return e;
}

ExprPtr parse_expr(std::string_view text) { return Parser(text, nullptr).run(); }

ExprPtr parse_expr(std::string_view text, std::span<const std::string> names) { return Parser(text, &names).run(); }

double eval_expr(const Expr& e, std::span<const double> values) {
  return eval_with(e, [&](const Expr& v) {
    if (v.var < 0 || static_cast<std::size_t>(v.var) >= values.size()) {
      throw std::out_of_range("variable '" + v.name + "' has no value");
    }
    return values[static_cast<std::size_t>(v.var)];
  });
}

double eval_expr(const Expr& e, const std::map<std::string, double>& values) {
  return eval_with(e, [&](const Expr& v) {
    const auto it = values.find(v.name);
    if (it == values.end()) throw std::out_of_range("variable '" + v.name + "' has no value");
    return it->second;
  });
}

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

bool same_structure(const Expr& a, const Expr& b) {
  if (a.op != b.op || a.name != b.name || a.var != b.var || a.args.size() != b.args.size()) return false;
  if (a.op == ExprOp::kConst && !(a.value == b.value || (std::isnan(a.value) && std::isnan(b.value)))) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_structure(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

std::vector<int> expr_variables(const Expr& e) {
  std::set<int> s;
  collect(e, s);
  return {s.begin(), s.end()};
}

std::optional<AffineForm> affine_form(const Expr& e) {
  if (!has_variables(e)) {
    try {
      AffineForm f;
      f.constant = eval_expr(e, std::span<const double>{});
      return f;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  switch (e.op) {
    case ExprOp::kVar: {
      if (e.var < 0) return std::nullopt;
      AffineForm f;
      f.coef[e.var] = 1.0;
      return f;
    }
    case ExprOp::kAdd:
    case ExprOp::kSub: {
      auto a = affine_form(*e.args[0]);
      auto b = affine_form(*e.args[1]);
      if (!a || !b) return std::nullopt;
      if (e.op == ExprOp::kSub) scale(*b, -1.0);
      for (const auto& [k, c] : b->coef) a->coef[k] += c;
      a->constant += b->constant;
      return a;
    }
    case ExprOp::kNeg: {
      auto a = affine_form(*e.args[0]);
      if (a) scale(*a, -1.0);
      return a;
    }
    case ExprOp::kMul: {
      auto a = affine_form(*e.args[0]);
      auto b = affine_form(*e.args[1]);
      if (!a || !b) return std::nullopt;
      if (a->coef.empty()) std::swap(a, b);
      if (!b->coef.empty()) return std::nullopt;
      scale(*a, b->constant);
      return a;
    }
    case ExprOp::kDiv: {
      auto a = affine_form(*e.args[0]);
      auto b = affine_form(*e.args[1]);
      if (!a || !b || !b->coef.empty() || b->constant == 0.0) return std::nullopt;
      scale(*a, 1.0 / b->constant);
      return a;
    }
    case ExprOp::kPow: {
      auto b = affine_form(*e.args[1]);
      if (b && b->coef.empty() && b->constant == 1.0) return affine_form(*e.args[0]);
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

std::vector<std::pair<double, ExprPtr>> split_sum(const ExprPtr& e) {
  std::vector<std::pair<double, ExprPtr>> out;
  auto walk = [&](auto&& self, const ExprPtr& node, double sign) -> void {
    switch (node->op) {
      case ExprOp::kAdd:
        self(self, node->args[0], sign);
        self(self, node->args[1], sign);
        return;
      case ExprOp::kSub:
        self(self, node->args[0], sign);
        self(self, node->args[1], -sign);
        return;
      case ExprOp::kNeg: self(self, node->args[0], -sign); return;
      default: out.emplace_back(sign, node);
    }
  };
  walk(walk, e, 1.0);
  return out;
}

}  // namespace sppa
