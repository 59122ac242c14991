#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramseylab/ramsey.hpp"
#include "ramseylab/reduction.hpp"

namespace ramseylab {

// A scenario is one JSON document: backend, engine, seed points, a coloring
// spec where the engine needs one, and a parameter block.
struct Scenario {
  Space space = Space::e0();
  std::string engine;  // ramsey | reduce | check-coloring | props
  std::vector<Point> seeds;
  Json coloring_spec;  // null for props
  Json params = Json::object();
  std::string output_path;  // optional destination hint
  Json raw;                 // the document as given, echoed into reports

  static Scenario from_json(const Json& doc);
  static Scenario load(const std::string& path);
};

struct RunOptions {
  unsigned jobs = 1;
  std::optional<std::uint64_t> fuel_override;
  std::optional<std::uint64_t> rng_seed_override;
};

struct RunReport {
  Json document;
  int exit_code = 0;  // 0 clean, 2 fuel exhausted somewhere, 1 errors
};

// Runs every seed through the engine. Workers claim seeds by index, results
// are slotted by index, and the report is byte stable apart from its top
// level "timing" block.
RunReport run_scenario(const Scenario& scenario, const RunOptions& options);

// Report text with the volatile timing block stripped, for comparisons.
std::string stable_report_text(const Json& report);

}  // namespace ramseylab
