#include "sppa/cli.hpp"

#include "sppa/builtins.hpp"
#include "sppa/problem_file.hpp"
#include "sppa/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace sppa {
namespace {

// CLI11 consumes a reversed argument vector.
bool parse(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err, int& code) {
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    code = kExitOk;
    return false;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitUsage;
    return false;
  }
  return true;
}

bool is_builtin(const std::string& name) {
  const auto& cat = builtin_catalog();
  return std::any_of(cat.begin(), cat.end(), [&](const BuiltinInfo& b) { return b.name == name; });
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string describe_point(const std::vector<std::string>& names, const std::vector<double>& x) {
  std::string s;
  for (std::size_t k = 0; k < x.size(); ++k) s += (k ? ", " : "") + names[k] + " = " + fixed(x[k], 10);
  return s;
}

}  // namespace

int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve a builtin benchmark or a problem file.", "sppa solve"};
  std::string problem, out_path, format = "json";
  std::optional<int> initial, pieces, max_iters;
  std::optional<double> frac, width_tol, time_limit;
  std::uint64_t seed = 0;
  bool verbose = false;
  app.add_option("--problem", problem, "builtin name or path to a problem file")->required();
  app.add_option("--initial-n-pieces", initial, "pieces per variable in the first iteration")
      ->check(CLI::PositiveNumber);
  app.add_option("--n-pieces", pieces, "pieces per variable afterwards")->check(CLI::PositiveNumber);
  app.add_option("--contract-frac", frac, "box shrink factor per iteration")->check(CLI::Range(0.0, 1.0));
  app.add_option("--max-iters", max_iters)->check(CLI::PositiveNumber);
  app.add_option("--width-tol", width_tol, "stop when every box side is this fraction of its start")
      ->check(CLI::PositiveNumber);
  app.add_option("--time-limit", time_limit, "seconds for the whole run")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the report here");
  app.add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "accepted for compatibility; runs are deterministic");
  app.add_flag("-v,--verbose", verbose, "print every iteration");

  int code = kExitOk;
  if (!parse(app, args, out, err, code)) return code;

  ProblemSpec spec;
  SppaConfig config;
  if (is_builtin(problem)) {
    const BuiltinInfo& info = builtin_info(problem);
    spec = builtin(problem);
    config.initial_n_pieces = info.initial_n_pieces;
    config.n_pieces = info.n_pieces;
    config.contract_frac = info.contract_frac;
  } else if (std::filesystem::is_regular_file(problem)) {
    try {
      spec = read_problem_file(problem);
    } catch (const ProblemParseError& e) {
      err << problem << ":" << e.line() << ":" << e.column() << ": " << e.message() << "\n";
      return kExitParse;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  } else {
    err << "error: unknown problem '" << problem << "' (not a builtin and not a file)\n";
    return kExitUsage;
  }
  if (initial) config.initial_n_pieces = *initial;
  if (pieces) config.n_pieces = *pieces;
  if (frac) config.contract_frac = *frac;
  if (max_iters) config.max_iters = *max_iters;
  if (width_tol) config.width_tol = *width_tol;
  if (time_limit) config.time_limit = *time_limit;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  RunReport report{spec.name, spec.variable_names(), config, {}, {}};
  auto progress = [&](const IterationRecord& rec) {
    if (!verbose) return;
    out << "iter " << rec.iter << "  objective " << fixed(rec.objective, 12) << "  width " << fixed(rec.max_width, 3)
        << "  nodes " << rec.nodes << "\n";
  };
  try {
    report.result = run(spec, config, progress);
  } catch (const std::exception& e) {
    report.error = e.what();
    err << "error: " << e.what() << "\n";
  }

  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      err << "error: cannot write '" << out_path << "'\n";
      return kExitFailed;
    }
    f << (format == "csv" ? report_csv(report) : report_json(report));
  }
  if (!report.error.empty()) return kExitFailed;

  const SppaResult& r = report.result;
  out << "problem     " << spec.name << "\n";
  if (r.has_point()) {
    out << "objective   " << fixed(r.best_objective, 12) << "\n";
    out << "point       " << describe_point(report.variables, r.best_point) << "\n";
  }
  out << "iterations  " << r.trace.size() << ", stopped by " << to_string(r.termination) << "\n";
  out << "time        " << fixed(r.seconds, 3) << " s\n";

  if (r.termination == Termination::kInfeasible && r.trace.empty()) return kExitInfeasible;
  return r.has_point() ? kExitOk : kExitFailed;
}

int cmd_table(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run every builtin with its default parameters.", "sppa table"};
  std::optional<double> budget;
  app.add_option("--budget", budget, "seconds allowed per problem")->check(CLI::PositiveNumber);
  int code = kExitOk;
  if (!parse(app, args, out, err, code)) return code;

  char line[256];
  std::snprintf(line, sizeof line, "%-12s %16s %12s %8s %8s %6s %9s  %s\n", "problem", "found", "optimal", "initial",
                "pieces", "frac", "seconds", "stopped by");
  out << line;
  bool any = false;
  for (const auto& info : builtin_catalog()) {
    SppaConfig config;
    config.initial_n_pieces = info.initial_n_pieces;
    config.n_pieces = info.n_pieces;
    config.contract_frac = info.contract_frac;
    if (budget) config.time_limit = *budget;
    std::string found = "-", stop;
    double seconds = 0.0;
    try {
      const SppaResult r = run(builtin(info.name), config);
      seconds = r.seconds;
      stop = to_string(r.termination);
      if (r.has_point()) {
        found = fixed(r.best_objective, 8);
        any = true;
      }
    } catch (const std::exception& e) {
      stop = std::string("error: ") + e.what();
    }
    std::snprintf(line, sizeof line, "%-12s %16s %12s %8d %8d %6.2f %9.2f  %s\n", info.name.c_str(), found.c_str(),
                  fixed(info.known_optimum, 8).c_str(), info.initial_n_pieces, info.n_pieces, info.contract_frac,
                  seconds, stop.c_str());
    out << line << std::flush;
  }
  return any ? kExitOk : kExitFailed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string usage =
      "usage: sppa solve --problem <name|file> [options]\n"
      "       sppa table [--budget S]\n"
      "builtins: rosenbrock, rastrigin, ackley, eggholder\n";
  if (args.empty()) {
    err << usage;
    return kExitUsage;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (args[0] == "solve") return cmd_solve(rest, out, err);
  if (args[0] == "table") return cmd_table(rest, out, err);
  if (args[0] == "-h" || args[0] == "--help") {
    out << usage;
    return kExitOk;
  }
  err << "error: unknown command '" << args[0] << "'\n" << usage;
  return kExitUsage;
}

}  // namespace sppa
