#include "jflow/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace jflow::report {
namespace {

// JSON has no NaN or infinity; those become null.
nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, int k) : out_(out), k_(k) {}

void CsvWriter::write_header() {
  out_ << "t";
  for (int m = 0; m <= k_; ++m) out_ << ",J_" << m;
  out_ << ",residual,dJk_dt,dJl_dt,min_u,max_u,osc_u,min_cone_margin\n";
}

void CsvWriter::write_row(const functionals::FunctionalReport& functionals,
                          const flow::StepDiagnostics& diagnostics, double min_cone_margin) {
  out_ << format_double(functionals.t);
  for (double j : functionals.J) out_ << ',' << format_double(j);
  out_ << ',' << format_double(diagnostics.residual) << ',' << format_double(functionals.dJk_dt)
       << ',' << format_double(functionals.dJl_dt) << ',' << format_double(diagnostics.u_min)
       << ',' << format_double(diagnostics.u_max) << ','
       << format_double(diagnostics.u_max - diagnostics.u_min) << ','
       << format_double(min_cone_margin) << '\n';
}

nlohmann::json to_json(const conecheck::ConeReport& report) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& m : report.fourier_coeffs) {
    if (m.cos_coeff == 0.0 && m.sin_coeff == 0.0) continue;
    coeffs.push_back({{"frequency", m.frequency}, {"cos", m.cos_coeff}, {"sin", m.sin_coeff}});
  }
  return {
      {"min_margin", number(report.min_margin)},
      {"epsilon_slack", number(report.epsilon_slack)},
      {"gamma_k_ok", report.gamma_k_ok},
      {"certified", report.certified()},
      {"argmin_point",
       {{"flat_index", report.argmin_point},
        {"index", report.argmin_index},
        {"coordinates", report.argmin_coordinates},
        {"spectrum", report.argmin_spectrum}}},
      {"fourier_coeffs", coeffs},
      {"evaluations", report.evaluations},
  };
}

nlohmann::json to_json(const flow::FailureDump& dump) {
  nlohmann::json j = {
      {"reason", dump.reason},
      {"t", dump.t},
      {"step", dump.step},
      {"dt_attempted", dump.dt_attempted},
      {"dt_cap", dump.dt_cap},
      {"backtracks", dump.backtracks},
      {"spectrum", dump.spectrum},
  };
  if (dump.point) {
    j["point"] = {{"flat_index", *dump.point},
                  {"index", dump.point_index},
                  {"coordinates", dump.coordinates}};
  } else {
    j["point"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const functionals::FunctionalReport& report) {
  return {{"t", report.t},
          {"J", report.J},
          {"c", report.c},
          {"dJk_dt", report.dJk_dt},
          {"dJl_dt", report.dJl_dt}};
}

nlohmann::json to_json(const flow::RunSummary& summary) {
  nlohmann::json j = {
      {"status", flow::to_string(summary.status)},
      {"c", summary.c},
      {"steps", summary.steps},
      {"total_backtracks", summary.total_backtracks},
      {"backtrack_warning", summary.backtrack_warning},
      {"ut_max0", summary.ut_max0},
      {"ut_min0", summary.ut_min0},
      {"max_principle_excess", summary.max_principle_excess},
      {"osc_sup", summary.osc_sup},
      {"J_k_initial", summary.J_k_initial},
      {"J_k_final", summary.J_k_final},
      {"J_k_drift", summary.J_k_final - summary.J_k_initial},
      {"max_dJl_dt", number(summary.max_dJl_dt)},
      {"dissipation_scale", summary.dissipation_scale},
  };
  if (summary.final_state) {
    j["t_final"] = summary.final_state->t;
    j["final_residual"] = summary.final_state->diagnostics.residual;
  }
  j["failure"] = summary.failure ? to_json(*summary.failure) : nlohmann::json(nullptr);
  return j;
}

}  // namespace jflow::report
