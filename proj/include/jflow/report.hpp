#pragma once

// Serialization of run artifacts: the CSV time series and JSON reports.

#include <json.hpp>

#include <iosfwd>
#include <string>

#include "jflow/conecheck.hpp"
#include "jflow/flow.hpp"
#include "jflow/functionals.hpp"

namespace jflow::report {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Columns: t, J_0..J_k, residual, dJk_dt, dJl_dt, min_u, max_u, osc_u,
/// min_cone_margin.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, int k);

  void write_header();
  void write_row(const functionals::FunctionalReport& functionals,
                 const flow::StepDiagnostics& diagnostics, double min_cone_margin);

 private:
  std::ostream& out_;
  int k_;
};

nlohmann::json to_json(const conecheck::ConeReport& report);
nlohmann::json to_json(const flow::FailureDump& dump);
nlohmann::json to_json(const functionals::FunctionalReport& report);
/// Monitor summary of a run (status, counters, maximum principle, osc, J
/// drift, dissipation) without the per-step history.
nlohmann::json to_json(const flow::RunSummary& summary);

}  // namespace jflow::report
