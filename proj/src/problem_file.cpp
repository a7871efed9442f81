#include "sppa/problem_file.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace sppa {
namespace {

struct Place {
  int line = 1, column = 1;
};

// A statement's text plus the source place of every character in it.
struct Statement {
  std::string text;
  std::vector<Place> places;

  Place at(std::size_t offset) const {
    if (places.empty()) return {};
    if (offset >= places.size()) {
      Place p = places.back();
      ++p.column;
      return p;
    }
    return places[offset];
  }
  void append(const std::string& s, int line, int column) {
    if (!text.empty()) {
      text += ' ';
      places.push_back({line, column});
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      text += s[i];
      places.push_back({line, column + static_cast<int>(i)});
    }
  }
};

enum class Section { kNone, kVariables, kObjective, kConstraints, kGroups };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& what, Place p) { throw ProblemParseError(what, p.line, p.column); }

// Whitespace-separated words with their starting offsets.
std::vector<std::pair<std::string, std::size_t>> words(const std::string& s) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start), start);
  }
  return out;
}

double number(const std::string& w, Place p) {
  char* end = nullptr;
  const double v = std::strtod(w.c_str(), &end);
  if (w.empty() || *end != '\0') fail("expected a number, got '" + w + "'", p);
  return v;
}

class Reader {
 public:
  ProblemSpec read(const std::string& text, const std::string& name) {
    split(text);
    spec_.name = name;

    std::set<std::string> seen;
    for (const auto& st : variables_) {
      const auto w = words(st.text);
      if (w.size() < 3 || w.size() > 4) fail("expected 'name lo hi [integer]'", st.at(0));
      const std::string& var = w[0].first;
      if (!std::isalpha(static_cast<unsigned char>(var[0])) && var[0] != '_') fail("invalid variable name", st.at(0));
      if (!seen.insert(var).second) fail("duplicate variable '" + var + "'", st.at(0));
      VariableDef def{var, number(w[1].first, st.at(w[1].second)), number(w[2].first, st.at(w[2].second)), false};
      if (w.size() == 4) {
        const std::string flag = lower(w[3].first);
        if (flag != "integer" && flag != "int") fail("unknown variable flag '" + w[3].first + "'", st.at(w[3].second));
        def.integer = true;
      }
      if (def.lo > def.hi) fail("lower bound exceeds upper bound", st.at(w[1].second));
      spec_.variables.push_back(def);
    }
    names_ = spec_.variable_names();

    for (const auto& st : groups_) {
      std::vector<VarId> g;
      for (const auto& [w, off] : words(st.text)) {
        const auto it = std::find(names_.begin(), names_.end(), w);
        if (it == names_.end()) fail("unknown variable '" + w + "'", st.at(off));
        g.push_back(static_cast<VarId>(it - names_.begin()));
      }
      groups_ids_.push_back(std::move(g));
    }

    if (!objective_) fail("missing [objective] section", {1, 1});
    read_objective(*objective_);
    for (const auto& st : constraints_) read_constraint(st);
    return std::move(spec_);
  }

 private:
  void split(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    Section section = Section::kNone;
    while (std::getline(in, raw)) {
      ++line;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const auto first = raw.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      const auto last = raw.find_last_not_of(" \t");
      const std::string body = raw.substr(first, last - first + 1);
      const int column = static_cast<int>(first) + 1;

      if (body.front() == '[') {
        if (body.back() != ']') fail("unterminated section header", {line, column});
        const std::string title = lower(body.substr(1, body.size() - 2));
        if (title == "variables") {
          section = Section::kVariables;
        } else if (title == "objective") {
          if (objective_) fail("duplicate [objective] section", {line, column});
          objective_.emplace();
          section = Section::kObjective;
        } else if (title == "constraints") {
          section = Section::kConstraints;
        } else if (title == "groups") {
          section = Section::kGroups;
        } else {
          fail("unknown section '" + body + "'", {line, column});
        }
        continue;
      }

      const bool continuation = first > 0;
      switch (section) {
        case Section::kNone: fail("text before the first section", {line, column});
        case Section::kVariables: variables_.emplace_back().append(body, line, column); break;
        case Section::kGroups: groups_.emplace_back().append(body, line, column); break;
        case Section::kObjective: objective_->append(body, line, column); break;
        case Section::kConstraints:
          if (!continuation || constraints_.empty()) constraints_.emplace_back();
          constraints_.back().append(body, line, column);
          break;
      }
    }
  }

  ExprPtr expression(const Statement& st, std::size_t begin, std::size_t end) {
    try {
      return parse_expr(std::string_view(st.text).substr(begin, end - begin), names_);
    } catch (const ExprParseError& e) {
      fail(e.message(), st.at(begin + e.position()));
    }
  }

  void add(const Statement& st, const ExprPtr& e, int row) {
    try {
      add_expression(spec_, e, row, groups_ids_);
      spec_.validate();
    } catch (const std::invalid_argument& ex) {
      fail(ex.what(), st.at(0));
    }
  }

  void read_objective(const Statement& st) {
    if (st.text.empty()) fail("empty objective", st.at(0));
    const auto w = words(st.text);
    const std::string head = lower(w[0].first);
    if (head == "minimize" || head == "min") {
      spec_.sense = ObjSense::kMinimize;
    } else if (head == "maximize" || head == "max") {
      spec_.sense = ObjSense::kMaximize;
    } else {
      fail("objective must start with 'minimize' or 'maximize'", st.at(0));
    }
    add(st, expression(st, w[0].first.size(), st.text.size()), -1);
  }

  void read_constraint(const Statement& st) {
    const std::string& s = st.text;
    std::size_t begin = 0;
    std::string label;
    if (const auto colon = s.find(':'); colon != std::string::npos) {
      label = s.substr(0, colon);
      label.erase(label.find_last_not_of(' ') + 1);
      const bool ident = !label.empty() && (std::isalpha(static_cast<unsigned char>(label[0])) || label[0] == '_') &&
                         std::all_of(label.begin(), label.end(),
                                     [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '.'; });
      if (!ident) fail("invalid constraint label", st.at(0));
      begin = colon + 1;
    }

    std::size_t op_at = std::string::npos, op_len = 0;
    RowSense sense = RowSense::kEqual;
    for (std::size_t i = begin; i < s.size(); ++i) {
      const char c = s[i];
      if (c != '<' && c != '>' && c != '=') continue;
      if (op_at != std::string::npos) fail("more than one comparison in a constraint", st.at(i));
      const char n = i + 1 < s.size() ? s[i + 1] : '\0';
      op_at = i;
      op_len = (n == '=' || (c == '=' && (n == '<' || n == '>'))) ? 2 : 1;
      const char key = c == '=' && op_len == 2 ? n : c;
      sense = key == '<' ? RowSense::kLessEqual : key == '>' ? RowSense::kGreaterEqual : RowSense::kEqual;
      i += op_len - 1;
    }
    if (op_at == std::string::npos) fail("constraint needs <=, >= or =", st.at(s.size()));

    const ExprPtr lhs = expression(st, begin, op_at);
    const ExprPtr rhs = expression(st, op_at + op_len, s.size());
    const int row = static_cast<int>(spec_.linear_constraints.size());
    spec_.linear_constraints.push_back(
        {label.empty() ? "c" + std::to_string(row + 1) : label, {}, sense, 0.0});
    add(st, make_node(ExprOp::kSub, {lhs, rhs}), row);
  }

  ProblemSpec spec_;
  std::vector<std::string> names_;
  std::vector<Statement> variables_, groups_, constraints_;
  std::optional<Statement> objective_;
  std::vector<std::vector<VarId>> groups_ids_;
};

}  // namespace

ProblemSpec parse_problem(const std::string& text, const std::string& name) { return Reader().read(text, name); }

ProblemSpec read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name.erase(0, slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name.erase(dot);
  return parse_problem(buf.str(), name);
}

}  // namespace sppa
