#include "sppa/report.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace sppa {
namespace {

using nlohmann::ordered_json;

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json numbers(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string report_json(const RunReport& report, bool with_timing) {
  const SppaConfig& c = report.config;
  const SppaResult& r = report.result;

  ordered_json j;
  j["problem"] = report.problem;
  j["variables"] = report.variables;
  j["config"] = {{"initial_n_pieces", c.initial_n_pieces},
                 {"n_pieces", c.n_pieces},
                 {"contract_frac", c.contract_frac},
                 {"max_iters", c.max_iters},
                 {"width_tol", c.width_tol},
                 {"obj_stall_tol", c.obj_stall_tol},
                 {"obj_stall_iters", c.obj_stall_iters},
                 {"time_limit", number(c.time_limit)}};

  ordered_json rows = ordered_json::array();
  for (const auto& rec : r.trace) {
    rows.push_back({{"iter", rec.iter},
                    {"objective", number(rec.objective)},
                    {"incumbent", numbers(rec.incumbent)},
                    {"max_width", rec.max_width},
                    {"nodes", rec.nodes},
                    {"surrogate", number(rec.surrogate)},
                    {"violation", number(rec.violation)},
                    {"pieces", rec.pieces},
                    {"binaries", rec.binaries},
                    {"lp_iterations", rec.lp_iterations},
                    {"status", std::string(to_string(rec.status))}});
  }
  j["iterations"] = std::move(rows);

  ordered_json fin;
  fin["termination"] = to_string(r.termination);
  if (r.has_point()) {
    fin["objective"] = number(r.best_objective);
    fin["point"] = numbers(r.best_point);
    fin["iter"] = r.best_iter;
  } else {
    fin["objective"] = nullptr;
    fin["point"] = nullptr;
    fin["iter"] = nullptr;
  }
  j["final"] = std::move(fin);
  if (!report.error.empty()) j["error"] = report.error;

  if (with_timing) {
    ordered_json per = ordered_json::array();
    for (const auto& rec : r.trace) per.push_back(rec.seconds);
    j["timing"] = {{"total_seconds", r.seconds}, {"iteration_seconds", std::move(per)}};
  }
  return j.dump(2) + "\n";
}

std::string report_csv(const RunReport& report, bool with_timing) {
  std::ostringstream os;
  const std::size_t d = report.variables.size();
  os << "iter,objective";
  for (std::size_t k = 1; k <= d; ++k) os << ",x" << k;
  os << ",max_width,nodes";
  if (with_timing) os << ",seconds";
  os << '\n';
  for (const auto& rec : report.result.trace) {
    os << rec.iter << ',' << format_double(rec.objective);
    for (double x : rec.incumbent) os << ',' << format_double(x);
    os << ',' << format_double(rec.max_width) << ',' << rec.nodes;
    if (with_timing) os << ',' << format_double(rec.seconds);
    os << '\n';
  }
  return os.str();
}

}  // namespace sppa
