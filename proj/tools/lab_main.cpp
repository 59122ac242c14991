#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ramseylab/scenario.hpp"

namespace {

int run_command(const std::string& scenario_path, const std::string& out_path,
                unsigned jobs, std::optional<std::uint64_t> fuel_override) {
  using namespace ramseylab;
  Scenario scenario = Scenario::load(scenario_path);

  RunOptions options;
  options.jobs = jobs;
  options.fuel_override = fuel_override;
  if (const char* env = std::getenv("LAB_SEED")) {
    options.rng_seed_override = std::stoull(env);
  }

  RunReport report = run_scenario(scenario, options);

  std::string destination = !out_path.empty() ? out_path : scenario.output_path;
  if (!destination.empty()) {
    std::ofstream out(destination);
    if (!out) {
      std::cerr << "cannot write report to " << destination << "\n";
      return 1;
    }
    out << report.document.dump(2) << "\n";
  } else {
    std::cout << report.document.dump(2) << "\n";
  }

  const auto& s = report.document.at("summary");
  std::cerr << "seeds " << s.at("seeds") << ", ok " << s.at("ok")
            << ", fuel exhausted " << s.at("fuel_exhausted") << ", errors "
            << s.at("errors") << ", verification failures "
            << s.at("verification_failures") << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenario runner for the equivalence relation laboratory"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  unsigned jobs = 1;
  std::optional<std::uint64_t> fuel_override;

  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("-s,--scenario", scenario_path, "scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_path,
                  "report destination (defaults to the scenario's output, else stdout)");
  run->add_option("-j,--jobs", jobs, "worker threads across seeds")
      ->check(CLI::Range(1u, 64u));
  std::uint64_t fuel_value = 0;
  auto* fuel_opt = run->add_option("--fuel-override", fuel_value,
                                   "replace the scenario's fuel budget");

  auto* version = app.add_subcommand("version", "print the engine version");

  CLI11_PARSE(app, argc, argv);

  if (version->parsed()) {
    std::cout << ramseylab::kEngineVersion << "\n";
    return 0;
  }
  if (fuel_opt->count() > 0) fuel_override = fuel_value;
  try {
    return run_command(scenario_path, out_path, jobs, fuel_override);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
