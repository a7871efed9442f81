#include "sppa/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace sppa {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

const std::unordered_set<std::string>& reserved_words() {
  static const std::unordered_set<std::string> words{
      "min",    "minimize", "minimise", "minimum", "max",    "maximize", "maximise", "maximum",
      "subject", "such",    "st",       "s.t.",    "bounds", "bound",    "general",  "generals",
      "gen",    "integer",  "integers", "binary",  "binaries", "bin",    "end",      "free",
      "inf",    "infinity"};
  return words;
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

class NameTable {
 public:
  std::string make(const std::string& raw, const std::string& fallback) {
    std::string s;
    for (char c : raw) s += name_char(c) ? c : '_';
    if (s.empty()) s = fallback;
    if (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.') s = "v" + s;
    if (reserved_words().count(lower(s))) s = "v_" + s;
    std::string candidate = s;
    for (int suffix = 1; used_.count(candidate); ++suffix) candidate = s + "_" + std::to_string(suffix);
    used_.insert(candidate);
    return candidate;
  }

 private:
  std::unordered_set<std::string> used_;
};

void write_terms(std::ostream& os, const std::vector<std::pair<VarId, double>>& terms,
                 const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (const auto& [var, coef] : terms) {
    if (on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
    if (coef < 0) {
      os << " - ";
    } else if (!first) {
      os << " + ";
    } else {
      os << ' ';
    }
    const double mag = std::abs(coef);
    if (mag != 1.0) os << number(mag) << ' ';
    os << names[var];
    first = false;
    ++on_line;
  }
}

// ---- reader ----

enum class Tok { kName, kNumber, kOp, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  double value = 0.0;
  int line = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\\') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t used = 0;
      const double v = std::stod(text.substr(i), &used);
      out.push_back({Tok::kNumber, text.substr(i, used), v, line});
      i += used;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < text.size() && name_char(text[j])) ++j;
      out.push_back({Tok::kName, text.substr(i, j - i), 0.0, line});
      i = j;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      if (i + 1 < text.size() && (text[i + 1] == '=' || text[i + 1] == '<' || text[i + 1] == '>')) {
        op += text[i + 1];
      }
      i += op.size();
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      if (op != "<=" && op != ">=" && op != "=") throw LpFormatError("unknown operator '" + op + "'", line);
      out.push_back({Tok::kOp, op, 0.0, line});
    } else if (c == '+' || c == '-' || c == ':') {
      out.push_back({Tok::kOp, std::string(1, c), 0.0, line});
      ++i;
    } else {
      throw LpFormatError(std::string("unexpected character '") + c + "'", line);
    }
  }
  out.push_back({Tok::kEnd, "", 0.0, line});
  return out;
}

enum class Section { kNone, kObjective, kConstraints, kBounds, kGenerals, kBinaries, kEnd };

class LpReader {
 public:
  explicit LpReader(const std::string& text) : toks_(tokenize(text)) {}

  LpProblem read() {
    Section section = Section::kNone;
    ObjSense sense = ObjSense::kMinimize;
    LinearExpr objective;
    while (peek().kind != Tok::kEnd) {
      if (auto next = section_at(pos_)) {
        if (*next == Section::kObjective) sense = objective_sense_;
        section = *next;
        if (section == Section::kEnd) break;
        continue;
      }
      switch (section) {
        case Section::kObjective:
          skip_label();
          objective = expression(true);
          break;
        case Section::kConstraints: read_row(); break;
        case Section::kBounds: read_bound(); break;
        case Section::kGenerals:
        case Section::kBinaries: {
          const Token& t = take();
          if (t.kind != Tok::kName) throw LpFormatError("expected a variable name, got '" + t.text + "'", t.line);
          auto& v = problem_.var(var(t.text));
          v.integer = true;
          if (section == Section::kBinaries) {
            v.lo = std::max(v.lo, 0.0);
            v.hi = std::min(v.hi, 1.0);
          }
          break;
        }
        default: throw LpFormatError("expected Minimize or Maximize", peek().line);
      }
    }
    problem_.set_objective(std::move(objective), sense);
    return std::move(problem_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  // Consumes a section header at position p, if any.
  std::optional<Section> section_at(std::size_t p) {
    const Token& t = toks_[p];
    if (t.kind != Tok::kName) return std::nullopt;
    const std::string w = lower(t.text);
    const bool colon = toks_[p + 1].kind == Tok::kOp && toks_[p + 1].text == ":";
    auto consume = [&](std::size_t n, Section s) {
      pos_ = p + n;
      return std::optional<Section>(s);
    };
    // `min:` is the lp_solve spelling of a header; any other name before ':'
    // is a label.
    if (w == "min" || w == "minimize" || w == "minimise" || w == "minimum") {
      objective_sense_ = ObjSense::kMinimize;
      return consume(colon ? 2 : 1, Section::kObjective);
    }
    if (w == "max" || w == "maximize" || w == "maximise" || w == "maximum") {
      objective_sense_ = ObjSense::kMaximize;
      return consume(colon ? 2 : 1, Section::kObjective);
    }
    if (colon) return std::nullopt;
    const std::string w2 = toks_[p + 1].kind == Tok::kName ? lower(toks_[p + 1].text) : "";
    if ((w == "subject" && w2 == "to") || (w == "such" && w2 == "that")) return consume(2, Section::kConstraints);
    if (w == "st" || w == "s.t.") return consume(1, Section::kConstraints);
    if (w == "bounds" || w == "bound") return consume(1, Section::kBounds);
    if (w == "general" || w == "generals" || w == "gen" || w == "integer" || w == "integers") {
      return consume(1, Section::kGenerals);
    }
    if (w == "binary" || w == "binaries" || w == "bin") return consume(1, Section::kBinaries);
    if (w == "end") return consume(1, Section::kEnd);
    return std::nullopt;
  }

  bool at_boundary() const {
    const Token& t = peek();
    if (t.kind == Tok::kEnd) return true;
    if (t.kind == Tok::kOp && (t.text == "<=" || t.text == ">=" || t.text == "=")) return true;
    if (t.kind == Tok::kName && peek(1).kind == Tok::kOp && peek(1).text == ":") return true;
    if (t.kind == Tok::kName) {
      const std::string w = lower(t.text);
      if (reserved_words().count(w) && w != "free" && w != "inf" && w != "infinity") return true;
    }
    return false;
  }

  void skip_label() {
    if (peek().kind == Tok::kName && peek(1).kind == Tok::kOp && peek(1).text == ":") pos_ += 2;
  }

  VarId var(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    const VarId id = problem_.add_variable(name, 0.0, kInf);
    ids_.emplace(name, id);
    return id;
  }

  LinearExpr expression(bool allow_constant) {
    LinearExpr e;
    bool first = true;
    while (!at_boundary()) {
      double sign = 1.0;
      bool had_sign = false;
      while (peek().kind == Tok::kOp && (peek().text == "+" || peek().text == "-")) {
        if (take().text == "-") sign = -sign;
        had_sign = true;
      }
      if (!first && !had_sign) throw LpFormatError("expected '+' or '-' between terms", peek().line);
      double coef = 1.0;
      bool had_number = false;
      if (peek().kind == Tok::kNumber) {
        coef = take().value;
        had_number = true;
      }
      if (peek().kind == Tok::kName && !at_boundary()) {
        e.add(var(take().text), sign * coef);
      } else if (had_number && allow_constant) {
        e.constant += sign * coef;
      } else {
        throw LpFormatError("malformed linear expression near '" + peek().text + "'", peek().line);
      }
      first = false;
    }
    return e;
  }

  double signed_value() {
    double sign = 1.0;
    while (peek().kind == Tok::kOp && (peek().text == "+" || peek().text == "-")) {
      if (take().text == "-") sign = -sign;
    }
    const Token& t = take();
    if (t.kind == Tok::kNumber) return sign * t.value;
    if (t.kind == Tok::kName && (lower(t.text) == "inf" || lower(t.text) == "infinity")) return sign * kInf;
    throw LpFormatError("expected a number, got '" + t.text + "'", t.line);
  }

  void read_row() {
    const int line = peek().line;
    std::string name;
    if (peek().kind == Tok::kName && peek(1).kind == Tok::kOp && peek(1).text == ":") {
      name = take().text;
      take();
    }
    LinearExpr lhs = expression(false);
    const Token& op = take();
    if (op.kind != Tok::kOp) throw LpFormatError("expected a row sense", line);
    LinearConstraint row;
    row.name = name;
    row.coefficients = std::move(lhs.terms);
    row.sense = op.text == "<=" ? RowSense::kLessEqual : op.text == ">=" ? RowSense::kGreaterEqual : RowSense::kEqual;
    row.rhs = signed_value();
    problem_.add_constraint(std::move(row));
  }

  void read_bound() {
    const int line = peek().line;
    const bool leading_value = peek().kind == Tok::kNumber || (peek().kind == Tok::kOp && peek().text != ":") ||
                               (peek().kind == Tok::kName && (lower(peek().text) == "inf" || lower(peek().text) == "infinity"));
    if (leading_value) {
      const double a = signed_value();
      const Token op1 = take();
      const Token name = take();
      if (op1.kind != Tok::kOp || name.kind != Tok::kName) throw LpFormatError("malformed bound", line);
      auto& v = problem_.var(var(name.text));
      apply(v, op1.text == "<=" ? ">=" : op1.text == ">=" ? "<=" : "=", a);
      if (peek().kind == Tok::kOp && (peek().text == "<=" || peek().text == ">=")) {
        const std::string op2 = take().text;
        apply(v, op2, signed_value());
      }
      if (v.lo > v.hi) throw LpFormatError("empty bound range for '" + name.text + "'", line);
      return;
    }
    const Token name = take();
    if (name.kind != Tok::kName) throw LpFormatError("malformed bound", line);
    auto& v = problem_.var(var(name.text));
    if (peek().kind == Tok::kName && lower(peek().text) == "free") {
      take();
      v.lo = -kInf;
      v.hi = kInf;
      return;
    }
    const Token op = take();
    if (op.kind != Tok::kOp) throw LpFormatError("malformed bound", line);
    apply(v, op.text, signed_value());
  }

  static void apply(VariableDef& v, const std::string& op, double value) {
    if (op == "<=") {
      v.hi = value;
    } else if (op == ">=") {
      v.lo = value;
    } else {
      v.lo = value;
      v.hi = value;
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  LpProblem problem_;
  std::unordered_map<std::string, VarId> ids_;
  ObjSense objective_sense_ = ObjSense::kMinimize;
};

}  // namespace

void write_lp(std::ostream& os, const LpProblem& problem) {
  NameTable table;
  std::vector<std::string> names;
  names.reserve(problem.vars().size());
  for (int j = 0; j < problem.num_vars(); ++j) names.push_back(table.make(problem.var(j).name, "x" + std::to_string(j)));

  os << "\\ sppa model: " << problem.num_vars() << " variables, " << problem.num_rows() << " rows\n";
  os << (problem.sense() == ObjSense::kMaximize ? "Maximize\n" : "Minimize\n");
  os << " obj:";
  write_terms(os, problem.objective().terms, names);
  const double constant = problem.objective().constant;
  if (constant != 0.0 || problem.objective().terms.empty()) {
    os << (constant < 0 ? " - " : " + ") << number(std::abs(constant));
  }
  os << "\nSubject To\n";
  for (int i = 0; i < problem.num_rows(); ++i) {
    const auto& row = problem.rows()[i];
    if (row.coefficients.empty()) continue;
    os << ' ' << table.make(row.name, "c" + std::to_string(i)) << ':';
    write_terms(os, row.coefficients, names);
    os << (row.sense == RowSense::kLessEqual ? " <= " : row.sense == RowSense::kGreaterEqual ? " >= " : " = ")
       << number(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < problem.num_vars(); ++j) {
    const auto& v = problem.var(j);
    os << ' ';
    if (v.lo == v.hi) {
      os << names[j] << " = " << number(v.lo);
    } else if (std::isinf(v.lo) && std::isinf(v.hi)) {
      os << names[j] << " free";
    } else if (std::isinf(v.lo)) {
      os << "-inf <= " << names[j] << " <= " << number(v.hi);
    } else if (std::isinf(v.hi)) {
      os << names[j] << " >= " << number(v.lo);
    } else {
      os << number(v.lo) << " <= " << names[j] << " <= " << number(v.hi);
    }
    os << '\n';
  }
  auto list = [&](const char* header, bool binary) {
    bool any = false;
    for (int j = 0; j < problem.num_vars(); ++j) {
      const auto& v = problem.var(j);
      if (!v.integer || (binary != (v.lo >= 0.0 && v.hi <= 1.0))) continue;
      if (!any) os << header << '\n';
      any = true;
      os << ' ' << names[j] << '\n';
    }
  };
  list("Generals", false);
  list("Binaries", true);
  os << "End\n";
}

std::string to_lp_string(const LpProblem& problem) {
  std::ostringstream os;
  write_lp(os, problem);
  return os.str();
}

LpProblem read_lp(std::istream& is) {
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_lp(text);
}

LpProblem parse_lp(const std::string& text) {
  try {
    return LpReader(text).read();
  } catch (const std::invalid_argument& e) {
    throw LpFormatError(e.what(), 0);
  }
}

}  // namespace sppa
