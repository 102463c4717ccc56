#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "jflow/config.hpp"
#include "jflow/flow.hpp"

using namespace jflow::flow;
using jflow::geometry::TorusGrid;

namespace {

BaseForm diag_base(int N, double amplitude) {
  const TorusGrid g(2, N);
  std::optional<ScalarField> rho;
  if (amplitude != 0.0) {
    rho = ScalarField::from_function(
        g, [amplitude](std::span<const double> x) { return amplitude * std::cos(x[0] + x[1]); });
  }
  return BaseForm(g, Eigen::Matrix2d{{1, 0}, {0, 2}}, rho, 2);
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

TEST_CASE("right-hand side examples") {
  const auto idx = FlowIndices::single(2, 2, 1);
  const TorusGrid g(2, 16);
  const BaseForm flat(g, 2.0 * Eigen::Matrix2d::Identity(), std::nullopt, 2);
  const double c_flat = jflow::functionals::normalization_c(flat, idx);
  CHECK(max_abs(rhs(ScalarField(g), flat, idx, c_flat).values()) < 1e-15);

  const auto diag = diag_base(16, 0.0);
  CHECK(max_abs(rhs(ScalarField(g), diag, idx, 0.75).values()) < 1e-15);

  const auto rho = ScalarField::from_function(g, [](std::span<const double> x) { return 0.1 * std::cos(x[0]); });
  const BaseForm bumpy(g, Eigen::Matrix2d{{1, 0}, {0, 2}}, rho, 2);
  const double c = jflow::functionals::normalization_c(bumpy, idx);
  const auto r = rhs(ScalarField(g), bumpy, idx, c);
  CHECK(r.max() - r.min() > 1e-3);
  const auto spectra = jflow::geometry::spectrum_field(bumpy.field());
  const double weighted = jflow::geometry::integrate_product(
      r, jflow::functionals::wedge_density(spectra, 2));
  CHECK(std::fabs(weighted) < 1e-13);
}

TEST_CASE("residual grows linearly with the potential amplitude") {
  const auto idx = FlowIndices::single(2, 2, 1);
  auto res = [&](double eps) {
    const auto base = diag_base(32, eps);
    return residual(ScalarField(base.grid()), base, idx,
                    jflow::functionals::normalization_c(base, idx));
  };
  const double slope = std::log10(res(1e-2) / res(1e-3));
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(res(0.0) == 0.0);
}

TEST_CASE("stationary state only advances time") {
  const TorusGrid g(2, 16);
  FlowConfig config(FlowIndices::single(2, 2, 1),
                    BaseForm(g, 1.5 * Eigen::Matrix2d::Identity(), std::nullopt, 2));
  auto state = initial_state(config);
  CHECK(state.diagnostics.residual < 1e-12);
  for (int s = 0; s < 5; ++s) {
    const auto next = step(state, config);
    CHECK(next.t > state.t);
    CHECK(next.steps == state.steps + 1);
    CHECK(max_abs(next.u.values()) < 1e-14);
    state = next;
  }
  const auto summary = run(config);
  CHECK(summary.status == RunStatus::Converged);
  CHECK(summary.steps == 0);
}

TEST_CASE("one Euler step from zero is dt times the right-hand side") {
  const auto base = diag_base(16, 0.05);
  FlowConfig config(FlowIndices::single(2, 2, 1), base);
  config.integrator = Integrator::Euler;
  config.dt_initial = 1e-3;
  const auto s0 = initial_state(config);
  const auto s1 = step(s0, config);
  REQUIRE(s1.dt == 1e-3);
  for (std::size_t p = 0; p < s1.u.size(); ++p) REQUIRE(s1.u[p] == s1.dt * s0.last_rhs[p]);
}

TEST_CASE("two Euler half-steps against one full step is second order per step") {
  const auto base = diag_base(16, 0.05);
  const auto idx = FlowIndices::single(2, 2, 1);
  const auto u0 = testgen::smooth_field(base.grid(), 21, 0.05);
  auto defect = [&](double dt) {
    FlowConfig full(idx, base);
    full.integrator = Integrator::Euler;
    full.initial = u0;
    full.dt_initial = dt;
    FlowConfig half = full;
    half.dt_initial = dt / 2;
    const auto a = step(initial_state(full), full);
    const auto b = step(step(initial_state(half), half), half);
    REQUIRE(a.dt == dt);
    REQUIRE(b.dt == dt / 2);
    double worst = 0.0;
    for (std::size_t p = 0; p < a.u.size(); ++p) worst = std::max(worst, std::fabs(a.u[p] - b.u[p]));
    return worst;
  };
  const double d1 = defect(0.02), d2 = defect(0.01), d3 = defect(0.005);
  for (double order : {std::log2(d1 / d2), std::log2(d2 / d3)}) {
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
  }
}

TEST_CASE("step size respects the explicit stability cap") {
  const auto base = diag_base(32, 0.05);
  FlowConfig config(FlowIndices::single(2, 2, 1), base);
  config.dt_initial = 10.0;
  const auto s0 = initial_state(config);
  const auto s1 = step(s0, config);
  const double h = base.grid().spacing();
  CHECK(s1.dt == doctest::Approx(config.safety * h * h / s0.stiffness).epsilon(1e-14));
}

TEST_CASE("inadmissible initial potential fails with a dump") {
  const auto base = diag_base(16, 0.0);
  FlowConfig config(FlowIndices::single(2, 2, 1), base);
  config.initial = ScalarField::from_function(base.grid(), [](std::span<const double> x) { return 10.0 * std::cos(x[0]); });
  try {
    (void)initial_state(config);
    FAIL("expected StepFailure");
  } catch (const StepFailure& f) {
    CHECK(f.dump().point.has_value());
    CHECK(f.dump().spectrum.size() == 2);
  }
}

TEST_CASE("engineered base never converges silently") {
  auto rc = jflow::config::parse_config(jflow::config::preset_text("adversarial"));
  auto config = rc.flow_config();
  const auto summary = run(config);
  CHECK(summary.status != RunStatus::Converged);
  if (summary.status == RunStatus::ConeExit) {
    REQUIRE(summary.failure.has_value());
    CHECK_FALSE(summary.failure->reason.empty());
    CHECK(exit_code(summary.status) == 3);
  }
}

TEST_CASE("convergent run obeys the monitors") {
  const auto base = diag_base(16, 0.05);
  FlowConfig config(FlowIndices::single(2, 2, 1), base);
  // At N = 16 the discrete c and the steady-state quotient differ by about
  // 2e-6, which floors the residual.
  config.residual_tol = 1e-5;
  config.t_max = 200.0;
  RunOptions options;
  std::size_t reports = 0;
  options.on_report = [&](const FlowState&, const jflow::functionals::FunctionalReport& r, double margin) {
    ++reports;
    CHECK(r.dJl_dt <= 1e-12);
    CHECK(margin > 0.0);
  };
  options.report_every = 200;
  const auto summary = run(config, options);
  REQUIRE(summary.status == RunStatus::Converged);
  CHECK(exit_code(summary.status) == 0);
  CHECK(summary.final_state->diagnostics.residual < 1e-5);
  CHECK(summary.max_principle_excess <= 1e-8);
  CHECK(reports >= 2);
  CHECK(summary.history.size() == summary.steps + 1);
}

TEST_CASE("budget exhaustion is reported as such") {
  const auto base = diag_base(16, 0.05);
  FlowConfig config(FlowIndices::single(2, 2, 1), base);
  config.max_steps = 3;
  const auto summary = run(config);
  CHECK(summary.status == RunStatus::BudgetExhausted);
  CHECK(summary.steps == 3);
  CHECK(exit_code(summary.status) == 2);
}

TEST_CASE("integrator names") {
  CHECK(parse_integrator("euler") == Integrator::Euler);
  CHECK(parse_integrator("rk4") == Integrator::Rk4);
  CHECK(to_string(Integrator::Rk4) == "rk4");
  CHECK_THROWS(parse_integrator("leapfrog"));
}
