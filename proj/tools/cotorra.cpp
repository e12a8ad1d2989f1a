#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cotorra/error.hpp"
#include "cotorra/scenario.hpp"
#include "cotorra/simulation.hpp"

namespace {

void print_summary(const cotorra::RunSummary& s) { std::cout << s.to_json().dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cotorra: edge-robotics testbed simulator"};
  app.require_subcommand(0, 1);

  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::optional<std::int64_t> tick_ms;
  std::string out = "out";
  std::vector<std::string> plugins;
  std::vector<std::string> overrides;
  app.add_option("--scenario", scenario, "scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--duration", duration, "simulated seconds");
  app.add_option("--tick-ms", tick_ms, "tick length in ms");
  app.add_option("--out", out, "output directory for traces");
  app.add_option("--plugin", plugins, "plug-in to enable (repeatable; replaces enabled_plugins)");
  app.add_option("--set", overrides, "override a config key, e.g. --set radio.eta=3.5");

  auto* summarize_cmd = app.add_subcommand("summarize", "recompute the summary from a run's CSV traces");
  std::string trace_dir;
  double target_ms = 15.0;
  summarize_cmd->add_option("dir", trace_dir, "directory with the CSV traces")->required();
  summarize_cmd->add_option("--target-ms", target_ms, "service-time target");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*summarize_cmd) {
      print_summary(cotorra::summarize(trace_dir, target_ms));
      return EXIT_SUCCESS;
    }
    if (scenario.empty()) {
      std::cerr << "error: --scenario is required\n";
      return 2;
    }
    if (seed) overrides.push_back("seed=" + std::to_string(*seed));
    if (duration) overrides.push_back("duration_s=" + nlohmann::json(*duration).dump());
    if (tick_ms) overrides.push_back("tick_ms=" + std::to_string(*tick_ms));
    const auto config = cotorra::load_scenario(scenario, overrides);
    print_summary(cotorra::run_scenario(config, out, plugins));
  } catch (const cotorra::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return EXIT_SUCCESS;
}
