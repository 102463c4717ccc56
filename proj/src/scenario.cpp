#include "jflow/scenario.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "jflow/errors.hpp"
#include "jflow/functionals.hpp"
#include "jflow/report.hpp"
#include "jflow/simd/kernels.hpp"

namespace jflow::scenario {
namespace {

namespace fs = std::filesystem;

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_field(const fs::path& path, const geometry::ScalarField& u, double t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  geometry::write_snapshot(out, u, "u", t);
}

std::string step_name(std::size_t step) {
  std::ostringstream s;
  s << "u_" << std::setw(8) << std::setfill('0') << step << ".txt";
  return s.str();
}

}  // namespace

ScenarioResult run_scenario(const config::RunConfig& config, std::ostream* log) {
  const fs::path dir = config.output_dir;
  fs::create_directories(dir / "snapshots");

  nlohmann::json metadata = {
      {"config", config.to_json()},
      {"defaulted_keys", config.defaulted},
      {"kernels", simd::to_string(simd::active().isa)},
  };
  write_json(dir / "metadata.json", metadata);

  flow::FlowConfig flow_config = config.flow_config();
  const auto& base = flow_config.base;
  const auto& idx = flow_config.idx;
  const double c = functionals::normalization_c(base, idx);

  conecheck::SearchOptions search;
  search.budget = std::max<std::size_t>(config.search_budget, 1);
  search.max_freq = config.search_max_freq;
  search.initial_step = config.search_step;
  search.seed = config.seed;
  ScenarioResult result{conecheck::search_cone(base, idx, c, search), {}, dir, 0};
  write_json(dir / "cone_report.json", report::to_json(result.cone));
  if (log != nullptr) {
    *log << "cone check: " << (result.cone.certified() ? "certified" : "not certified")
         << " within search space, min_margin " << result.cone.min_margin << ", slack "
         << result.cone.epsilon_slack << ", c " << c << '\n';
  }

  std::ofstream csv_stream(dir / "run.csv");
  if (!csv_stream) throw std::runtime_error("cannot write run.csv");
  report::CsvWriter csv(csv_stream, idx.k());
  csv.write_header();

  std::optional<functionals::FunctionalReport> first_report;
  std::optional<functionals::FunctionalReport> last_report;
  flow::RunOptions options;
  options.report_every = config.report_every;
  options.keep_history = false;
  options.on_report = [&](const flow::FlowState& s, const functionals::FunctionalReport& fr,
                          double margin) {
    csv.write_row(fr, s.diagnostics, margin);
    if (!first_report) first_report = fr;
    last_report = fr;
    if (log != nullptr) {
      *log << "step " << s.steps << " t " << s.t << " residual " << s.diagnostics.residual
           << " J_k " << fr.J.back() << '\n';
    }
  };
  if (config.snapshot_every > 0) {
    options.on_step = [&](const flow::FlowState& s) {
      if (s.steps % config.snapshot_every == 0) {
        write_field(dir / "snapshots" / step_name(s.steps), s.u, s.t);
      }
    };
  }

  result.summary = flow::run(flow_config, options);
  csv_stream.close();
  if (result.summary.final_state) {
    write_field(dir / "snapshots" / "u_final.txt", result.summary.final_state->u,
                result.summary.final_state->t);
  }

  nlohmann::json functional_json = {
      {"initial", first_report ? report::to_json(*first_report) : nlohmann::json(nullptr)},
      {"final", last_report ? report::to_json(*last_report) : nlohmann::json(nullptr)},
      {"monitors", report::to_json(result.summary)},
      {"cone_certified", result.cone.certified()},
  };
  write_json(dir / "functional_report.json", functional_json);
  if (result.summary.failure) {
    write_json(dir / "failure_dump.json", report::to_json(*result.summary.failure));
  }

  result.exit_code = flow::exit_code(result.summary.status);
  if (log != nullptr) {
    *log << "status " << flow::to_string(result.summary.status) << " after "
         << result.summary.steps << " steps\n";
    if (result.summary.failure) *log << "failure: " << result.summary.failure->reason << '\n';
  }
  return result;
}

}  // namespace jflow::scenario
