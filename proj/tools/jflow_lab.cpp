// Command-line driver: parse a config (or preset), run the scenario, write
// artifacts. Exit status 0 converged, 2 budget exhausted, 3 cone exit,
// 1 configuration or I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "jflow/config.hpp"
#include "jflow/errors.hpp"
#include "jflow/parallel.hpp"
#include "jflow/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted-quotient J-flow runs on the flat torus"};
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  int verbosity = 0;
  bool list_presets = false;
  bool print_config = false;

  app.add_option("-c,--config", config_path, "Config file (key = value lines)");
  app.add_option("-p,--preset", preset, "Named preset used as the base document");
  app.add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("-s,--set", overrides, "Override key=value (dotted keys, repeatable)");
  app.add_option("--seed", seed, "Seed for the cone search");
  app.add_option("-t,--threads", threads, "Worker threads (default: hardware)");
  app.add_flag("-v,--verbose", verbosity, "Progress output");
  app.add_flag("--list-presets", list_presets, "Print preset names and exit");
  app.add_flag("--print-config", print_config, "Print the resolved config as JSON and exit");
  CLI11_PARSE(app, argc, argv);

  if (list_presets) {
    for (const auto& name : jflow::config::preset_names()) std::cout << name << '\n';
    return 0;
  }
  if (config_path.empty() == preset.empty()) {
    std::cerr << "give exactly one of --config or --preset\n";
    return 1;
  }

  try {
    std::string text;
    if (!preset.empty()) {
      text = jflow::config::preset_text(preset);
    } else {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read " << config_path << '\n';
        return 1;
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
    if (seed) overrides.push_back("seed=" + std::to_string(*seed));
    const auto config = jflow::config::parse_config(text, overrides);
    if (print_config) {
      std::cout << config.to_json().dump(2) << '\n';
      return 0;
    }
    if (threads > 0) jflow::parallel::set_thread_count(threads);

    const auto result = jflow::scenario::run_scenario(config, verbosity > 0 ? &std::cerr : nullptr);
    std::cout << "status: " << jflow::flow::to_string(result.summary.status) << '\n'
              << "steps: " << result.summary.steps << '\n'
              << "cone certified: " << (result.cone.certified() ? "yes" : "no") << '\n'
              << "artifacts: " << result.output_dir.string() << '\n';
    if (result.summary.failure) {
      std::cout << "failure: " << result.summary.failure->reason << '\n';
    }
    return result.exit_code;
  } catch (const jflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const jflow::ConeViolation& e) {
    std::cerr << "base form rejected: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
