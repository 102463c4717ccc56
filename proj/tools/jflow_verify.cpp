// Runs the brute-force cross-checks and prints a pass/fail table; optional
// JSON report. Exit status 0 iff every check passes.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "oracle/checks.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Oracle cross-checks for the J-flow library"};
  std::string json_path;
  std::uint64_t seed = 20240611;
  app.add_option("--json", json_path, "Write the results as JSON");
  app.add_option("--seed", seed, "Seed for the random samples");
  CLI11_PARSE(app, argc, argv);

  const auto results = oracle::run_oracle_checks(seed);
  bool all = true;
  std::printf("%-28s %-6s %-14s %-10s %s\n", "check", "result", "measured", "tolerance",
              "detail");
  for (const auto& r : results) {
    all = all && r.passed;
    std::printf("%-28s %-6s %-14.6g %-10.3g %s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                r.measured, r.tolerance, r.detail.c_str());
  }
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "cannot write " << json_path << '\n';
      return 1;
    }
    out << nlohmann::json{{"seed", seed}, {"all_passed", all}, {"checks", oracle::to_json(results)}}
               .dump(2)
        << '\n';
  }
  return all ? 0 : 1;
}
