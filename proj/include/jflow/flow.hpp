#pragma once

// Explicit time integration of
//   du/dt = c - (sum_m b_m chi_u^m ^ w^(n-m)) / (chi_u^k ^ w^(n-k))
// with a Gamma_k guard on every tentative state.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jflow/functionals.hpp"
#include "jflow/geometry.hpp"
#include "jflow/symfunc.hpp"

namespace jflow::flow {

using geometry::BaseForm;
using geometry::ScalarField;
using geometry::SpectrumField;
using symfunc::FlowIndices;

enum class Integrator { Euler, Rk4 };

std::string_view to_string(Integrator integrator);
Integrator parse_integrator(std::string_view name);

struct FlowConfig {
  FlowConfig(FlowIndices indices, BaseForm base_form)
      : idx(std::move(indices)), base(std::move(base_form)) {}

  FlowIndices idx;
  BaseForm base;
  double dt_initial = 1e-2;
  double dt_min = 1e-9;
  /// Fraction of the explicit stability bound h^2 / D actually used.
  double safety = 0.9;
  double t_max = 100.0;
  double residual_tol = 1e-8;
  Integrator integrator = Integrator::Rk4;
  /// u(., 0); zero when absent.
  std::optional<ScalarField> initial;
  std::size_t max_steps = 5'000'000;
  /// Backtracks in a single run above which the summary flags possible
  /// masking of a genuine cone exit.
  std::size_t backtrack_warning = 32;

  const geometry::TorusGrid& grid() const noexcept { return base.grid(); }
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// Pointwise evaluation of the flow right-hand side at one potential.
struct Evaluation {
  ScalarField rhs;
  SpectrumField spectra;
  /// max over points of (n+3)/2 * (1/4) sum_i |dQ/dlambda_i|; the explicit
  /// step is stable for dt <= h^2 / stiffness.
  double stiffness = 0.0;
  /// First point (lexicographic order) attaining the stiffness.
  std::size_t stiffness_point = 0;
};

/// Throws ConeViolation (carrying the lowest offending point) if chi_u
/// leaves Gamma_k anywhere.
Evaluation evaluate(const ScalarField& u, const BaseForm& base, const FlowIndices& idx, double c);

/// c - quotient(lambda(x)) at every point.
ScalarField rhs(const ScalarField& u, const BaseForm& base, const FlowIndices& idx, double c);

/// sup_x |c - quotient(lambda(x))|.
double residual(const ScalarField& u, const BaseForm& base, const FlowIndices& idx, double c);

struct StepDiagnostics {
  double residual = 0.0;
  double ut_min = 0.0;
  double ut_max = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  double dJk_dt = 0.0;
  double dJl_dt = 0.0;
  std::size_t backtracks = 0;
};

struct FlowState {
  ScalarField u;
  double t = 0.0;
  /// Step size used to reach this state (0 for the initial state).
  double dt = 0.0;
  ScalarField last_rhs;
  double c = 0.0;
  double stiffness = 0.0;
  std::size_t stiffness_point = 0;
  std::size_t steps = 0;
  StepDiagnostics diagnostics;
};

/// Everything known about a failed step, for the run's diagnostic dump.
struct FailureDump {
  std::string reason;
  double t = 0.0;
  std::size_t step = 0;
  double dt_attempted = 0.0;
  double dt_cap = 0.0;
  std::size_t backtracks = 0;
  std::optional<std::size_t> point;
  std::vector<int> point_index;
  std::vector<double> coordinates;
  std::vector<double> spectrum;
};

/// Raised when the step size would drop below dt_min (cone exit or
/// stiffness), or the initial state is inadmissible.
class StepFailure : public std::runtime_error {
 public:
  explicit StepFailure(FailureDump dump)
      : std::runtime_error(dump.reason), dump_(std::move(dump)) {}
  const FailureDump& dump() const noexcept { return dump_; }

 private:
  FailureDump dump_;
};

/// Initial state with c computed once from the base form.
FlowState initial_state(const FlowConfig& config);

/// One accepted step: dt = min(dt_initial, safety h^2 / stiffness), halved
/// while any tentative state leaves Gamma_k.
FlowState step(const FlowState& state, const FlowConfig& config);

enum class RunStatus { Converged, BudgetExhausted, ConeExit };

std::string_view to_string(RunStatus status);
/// 0 converged, 2 budget exhausted, 3 cone exit / stiffness failure.
int exit_code(RunStatus status);

struct StepRecord {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  StepDiagnostics diagnostics;
};

struct RunSummary {
  RunStatus status = RunStatus::BudgetExhausted;
  std::optional<FlowState> final_state;
  double c = 0.0;
  std::size_t steps = 0;
  std::size_t total_backtracks = 0;
  bool backtrack_warning = false;
  /// u_t extremes at t = 0 and the worst excursion beyond them afterwards.
  double ut_max0 = 0.0;
  double ut_min0 = 0.0;
  double max_principle_excess = 0.0;
  double osc_sup = 0.0;
  double J_k_initial = 0.0;
  double J_k_final = 0.0;
  double max_dJl_dt = 0.0;
  /// |int sum_m b_m chi^m ^ w^(n-m)| of the base form; scale for dJl_dt.
  double dissipation_scale = 0.0;
  std::vector<StepRecord> history;
  std::optional<FailureDump> failure;
};

struct RunOptions {
  /// Full functional reports (J_0..J_k, cone margin) every this many steps;
  /// the initial and final states are always reported.
  std::size_t report_every = 10;
  std::function<void(const FlowState&, const functionals::FunctionalReport&, double min_margin)>
      on_report;
  std::function<void(const FlowState&)> on_step;
  bool keep_history = true;
};

RunSummary run(const FlowConfig& config, const RunOptions& options = {});

/// Minimum over points of the cone margin of chi_u; ConeViolation if chi_u
/// leaves Gamma_k.
double min_cone_margin(const SpectrumField& spectra, double c, const FlowIndices& idx);

}  // namespace jflow::flow
