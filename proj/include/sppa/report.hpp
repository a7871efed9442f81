#pragma once

// Run reports. Wall-clock fields live apart from everything else so two
// runs of the same command can be compared byte for byte once they are
// dropped.

#include "sppa/sppa_loop.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sppa {

struct RunReport {
  std::string problem;
  std::vector<std::string> variables;
  SppaConfig config;
  SppaResult result;
  std::string error;  // set when the run aborted
};

/// `with_timing` = false drops every wall-clock field.
std::string report_json(const RunReport& report, bool with_timing = true);

/// Columns: iter, objective, one per variable, max_width, nodes, seconds.
std::string report_csv(const RunReport& report, bool with_timing = true);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace sppa
