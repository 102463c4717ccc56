#pragma once

// End-to-end experiment: cone certification, flow run, artifact emission.
//
// Artifacts written under config.output_dir:
//   run.csv                 functional / monitor time series
//   cone_report.json        best cone certificate found
//   functional_report.json  initial and final functionals plus run monitors
//   snapshots/*.txt         u at the configured cadence and at the end
//   metadata.json           resolved configuration and applied defaults
//   failure_dump.json       only when the run ends in a step failure

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "jflow/conecheck.hpp"
#include "jflow/config.hpp"
#include "jflow/flow.hpp"

namespace jflow::scenario {

struct ScenarioResult {
  conecheck::ConeReport cone;
  flow::RunSummary summary;
  std::filesystem::path output_dir;
  int exit_code = 0;
};

/// `log` receives one progress line per report when non-null.
ScenarioResult run_scenario(const config::RunConfig& config, std::ostream* log = nullptr);

}  // namespace jflow::scenario
