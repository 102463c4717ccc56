#include "jflow/flow.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <utility>
#include <string>

#include "jflow/errors.hpp"
#include "jflow/parallel.hpp"
#include "jflow/simd/kernels.hpp"

namespace jflow::flow {
namespace {

constexpr int kMaxDim = symfunc::kMaxDim;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ScalarField combine(const ScalarField& x, double a, const ScalarField& y) {
  ScalarField out(x.grid());
  simd::active().axpy(x.values().data(), a, y.values().data(), out.values().data(), x.size());
  return out;
}

StepDiagnostics diagnose(const ScalarField& u, const Evaluation& eval, const FlowIndices& idx) {
  StepDiagnostics d;
  const auto& k = simd::active();
  k.minmax(eval.rhs.values().data(), eval.rhs.size(), &d.ut_min, &d.ut_max);
  k.minmax(u.values().data(), u.size(), &d.u_min, &d.u_max);
  d.residual = std::max(std::fabs(d.ut_min), std::fabs(d.ut_max));
  d.dJk_dt = functionals::dJ_m_dt(eval.spectra, eval.rhs, idx.k());
  d.dJl_dt =
      geometry::integrate_product(eval.rhs, functionals::numerator_density(eval.spectra, idx));
  return d;
}

FailureDump make_dump(std::string reason, const FlowState& state, const geometry::TorusGrid& grid,
                      double dt_attempted, double dt_cap, std::size_t backtracks,
                      const ConeViolation* violation) {
  FailureDump dump;
  dump.reason = std::move(reason);
  dump.t = state.t;
  dump.step = state.steps;
  dump.dt_attempted = dt_attempted;
  dump.dt_cap = dt_cap;
  dump.backtracks = backtracks;
  if (violation != nullptr) {
    dump.spectrum = violation->spectrum();
    if (violation->point() != ConeViolation::kNoPoint) {
      dump.point = violation->point();
      dump.point_index = grid.multi_index(violation->point());
      dump.coordinates = grid.coordinates(violation->point());
    }
  }
  return dump;
}

double stable_dt(const FlowConfig& config, double stiffness) {
  const double h = config.grid().spacing();
  const double cap = stiffness > 0.0 ? config.safety * h * h / stiffness
                                     : std::numeric_limits<double>::infinity();
  return std::min(config.dt_initial, cap);
}

// Tentative state after one step of size dt from `state`. Throws
// ConeViolation if any stage leaves Gamma_k.
std::pair<ScalarField, Evaluation> advance(const FlowState& state, const FlowConfig& config,
                                           double dt) {
  const auto& base = config.base;
  const auto& idx = config.idx;
  const double c = state.c;
  if (config.integrator == Integrator::Euler) {
    ScalarField next = combine(state.u, dt, state.last_rhs);
    Evaluation eval = evaluate(next, base, idx, c);
    return {std::move(next), std::move(eval)};
  }
  const ScalarField& k1 = state.last_rhs;
  const ScalarField k2 = evaluate(combine(state.u, 0.5 * dt, k1), base, idx, c).rhs;
  const ScalarField k3 = evaluate(combine(state.u, 0.5 * dt, k2), base, idx, c).rhs;
  const ScalarField k4 = evaluate(combine(state.u, dt, k3), base, idx, c).rhs;
  // u + dt/6 (k1 + 2 k2 + 2 k3 + k4)
  ScalarField incr = combine(k1, 2.0, k2);
  const auto& kern = simd::active();
  kern.accumulate(incr.values().data(), 2.0, k3.values().data(), incr.size());
  kern.accumulate(incr.values().data(), 1.0, k4.values().data(), incr.size());
  ScalarField next = combine(state.u, dt / 6.0, incr);
  Evaluation eval = evaluate(next, base, idx, c);
  return {std::move(next), std::move(eval)};
}

}  // namespace

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::Euler ? "euler" : "rk4";
}

Integrator parse_integrator(std::string_view name) {
  if (name == "euler") return Integrator::Euler;
  if (name == "rk4") return Integrator::Rk4;
  throw std::invalid_argument("unknown integrator '" + std::string(name) +
                              "' (expected euler or rk4)");
}

void FlowConfig::validate() const {
  if (idx.n() != grid().dim()) throw std::invalid_argument("flow indices do not match grid");
  if (base.cone_degree() != idx.k()) {
    throw std::invalid_argument("base form was checked against a different cone degree");
  }
  if (!(dt_initial > 0.0) || !(dt_min > 0.0) || !(dt_min < dt_initial)) {
    throw std::invalid_argument("need 0 < dt_min < dt_initial");
  }
  if (!(safety > 0.0 && safety <= 1.0)) throw std::invalid_argument("safety must lie in (0, 1]");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  if (initial && !(initial->grid() == grid())) {
    throw std::invalid_argument("initial potential lives on a different grid");
  }
}

Evaluation evaluate(const ScalarField& u, const BaseForm& base, const FlowIndices& idx, double c) {
  const auto& grid = base.grid();
  if (!(u.grid() == grid)) throw std::invalid_argument("evaluate: grid mismatch");
  const int n = grid.dim();
  Evaluation eval{ScalarField(grid), geometry::spectrum_field(geometry::chi_u(base, u)), 0.0};
  const double stencil_factor = 0.5 * (n + 3) * 0.25;

  std::vector<std::pair<double, std::size_t>> worker_stiffness;
  std::mutex guard;
  parallel::parallel_for(
      grid.size(),
      [&](std::size_t begin, std::size_t end) {
        std::array<double, kMaxDim> lambda{};
        std::array<double, kMaxDim> grad{};
        const auto lam = std::span(lambda).first(static_cast<std::size_t>(n));
        const auto g = std::span(grad).first(static_cast<std::size_t>(n));
        std::pair<double, std::size_t> local{0.0, begin};
        for (std::size_t p = begin; p < end; ++p) {
          eval.spectra.point(p, lam);
          if (!symfunc::in_gamma_k(lam, idx.k())) {
            throw ConeViolation("chi_u leaves Gamma_" + std::to_string(idx.k()) +
                                    " at grid point " + std::to_string(p),
                                std::vector<double>(lam.begin(), lam.end()), p);
          }
          eval.rhs[p] = c - symfunc::quotient_rhs(lam, idx);
          symfunc::quotient_gradient(lam, idx, g);
          double trace = 0.0;
          for (double d : g) trace += std::fabs(d);
          if (stencil_factor * trace > local.first) local = {stencil_factor * trace, p};
        }
        std::lock_guard lock(guard);
        worker_stiffness.push_back(local);
      },
      static_cast<std::size_t>(n * n));
  std::sort(worker_stiffness.begin(), worker_stiffness.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  for (const auto& [value, point] : worker_stiffness) {
    if (value > eval.stiffness || point == worker_stiffness.front().second) {
      eval.stiffness = value;
      eval.stiffness_point = point;
    }
  }
  return eval;
}

ScalarField rhs(const ScalarField& u, const BaseForm& base, const FlowIndices& idx, double c) {
  return evaluate(u, base, idx, c).rhs;
}

double residual(const ScalarField& u, const BaseForm& base, const FlowIndices& idx, double c) {
  const ScalarField r = rhs(u, base, idx, c);
  double lo = 0.0;
  double hi = 0.0;
  simd::active().minmax(r.values().data(), r.size(), &lo, &hi);
  return std::max(std::fabs(lo), std::fabs(hi));
}

double min_cone_margin(const SpectrumField& spectra, double c, const FlowIndices& idx) {
  const int n = spectra.dim();
  double best = std::numeric_limits<double>::infinity();
  std::array<double, kMaxDim> lambda{};
  const auto lam = std::span(lambda).first(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < spectra.grid().size(); ++p) {
    spectra.point(p, lam);
    best = std::min(best, symfunc::cone_margin(lam, c, idx));
  }
  return best;
}

FlowState initial_state(const FlowConfig& config) {
  config.validate();
  const double c = functionals::normalization_c(config.base, config.idx);
  ScalarField u = config.initial ? *config.initial : ScalarField(config.grid());
  FlowState state{u, 0.0, 0.0, ScalarField(config.grid()), c, 0.0, 0, 0, {}};
  try {
    Evaluation eval = evaluate(u, config.base, config.idx, c);
    state.diagnostics = diagnose(u, eval, config.idx);
    state.last_rhs = std::move(eval.rhs);
    state.stiffness = eval.stiffness;
    state.stiffness_point = eval.stiffness_point;
  } catch (const ConeViolation& v) {
    throw StepFailure(make_dump(std::string("initial potential is inadmissible: ") + v.what(),
                                state, config.grid(), 0.0, 0.0, 0, &v));
  }
  return state;
}

FlowState step(const FlowState& state, const FlowConfig& config) {
  const double dt_cap = stable_dt(config, state.stiffness);
  double dt = dt_cap;
  std::size_t backtracks = 0;
  std::optional<ConeViolation> last_violation;
  while (true) {
    if (dt < config.dt_min) {
      std::string reason =
          last_violation
              ? "cone exit: step size fell below dt_min while backtracking; last violation: " +
                    std::string(last_violation->what())
              : "stiffness: stable step size " + shortest(dt_cap) + " is below dt_min " +
                    shortest(config.dt_min);
      if (!last_violation) {
        // Report the stiffest point in place of a violating one.
        const auto spectra = geometry::spectrum_field(geometry::chi_u(config.base, state.u));
        last_violation.emplace(reason, spectra.point(state.stiffness_point),
                               state.stiffness_point);
      }
      throw StepFailure(make_dump(std::move(reason), state, config.grid(), dt, dt_cap, backtracks,
                                  &*last_violation));
    }
    try {
      auto [next_u, eval] = advance(state, config, dt);
      FlowState next{std::move(next_u),
                     state.t + dt,
                     dt,
                     ScalarField(config.grid()),
                     state.c,
                     eval.stiffness,
                     eval.stiffness_point,
                     state.steps + 1,
                     {}};
      next.diagnostics = diagnose(next.u, eval, config.idx);
      next.diagnostics.backtracks = backtracks;
      next.last_rhs = std::move(eval.rhs);
      return next;
    } catch (const ConeViolation& v) {
      last_violation.emplace(v);
      dt *= 0.5;
      ++backtracks;
    }
  }
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return "converged";
    case RunStatus::BudgetExhausted:
      return "budget_exhausted";
    case RunStatus::ConeExit:
      return "cone_exit";
  }
  return "unknown";
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::Converged:
      return 0;
    case RunStatus::BudgetExhausted:
      return 2;
    case RunStatus::ConeExit:
      return 3;
  }
  return 1;
}

RunSummary run(const FlowConfig& config, const RunOptions& options) {
  RunSummary summary;
  const auto& idx = config.idx;

  std::optional<FlowState> current;
  try {
    current = initial_state(config);
  } catch (const StepFailure& failure) {
    summary.status = RunStatus::ConeExit;
    summary.failure = failure.dump();
    return summary;
  }
  summary.c = current->c;
  {
    const SpectrumField base_spectra = geometry::spectrum_field(config.base.field());
    summary.dissipation_scale = std::fabs(geometry::integrate(
        config.grid(), functionals::numerator_density(base_spectra, idx)));
  }
  summary.ut_max0 = current->diagnostics.ut_max;
  summary.ut_min0 = current->diagnostics.ut_min;
  summary.osc_sup = current->diagnostics.u_max - current->diagnostics.u_min;
  summary.max_dJl_dt = -std::numeric_limits<double>::infinity();

  const auto report = [&](const FlowState& s) {
    const auto fr = functionals::functional_report(s.t, s.u, s.last_rhs, config.base, idx, s.c);
    if (s.steps == 0) summary.J_k_initial = fr.J.back();
    summary.J_k_final = fr.J.back();
    if (options.on_report) {
      const auto spectra = geometry::spectrum_field(geometry::chi_u(config.base, s.u));
      options.on_report(s, fr, min_cone_margin(spectra, s.c, idx));
    }
  };
  const auto record = [&](const FlowState& s) {
    if (options.keep_history) summary.history.push_back({s.steps, s.t, s.dt, s.diagnostics});
    if (options.on_step) options.on_step(s);
  };

  record(*current);
  report(*current);
  bool reported_last = true;

  while (true) {
    if (current->diagnostics.residual < config.residual_tol) {
      summary.status = RunStatus::Converged;
      break;
    }
    if (current->t >= config.t_max || current->steps >= config.max_steps) {
      summary.status = RunStatus::BudgetExhausted;
      break;
    }
    try {
      current = step(*current, config);
    } catch (const StepFailure& failure) {
      summary.status = RunStatus::ConeExit;
      summary.failure = failure.dump();
      break;
    }
    const auto& d = current->diagnostics;
    summary.total_backtracks += d.backtracks;
    summary.max_principle_excess =
        std::max({summary.max_principle_excess, d.ut_max - summary.ut_max0,
                  summary.ut_min0 - d.ut_min});
    summary.osc_sup = std::max(summary.osc_sup, d.u_max - d.u_min);
    summary.max_dJl_dt = std::max(summary.max_dJl_dt, d.dJl_dt);
    record(*current);
    reported_last = options.report_every > 0 && current->steps % options.report_every == 0;
    if (reported_last) report(*current);
  }
  if (!reported_last) report(*current);

  summary.steps = current->steps;
  summary.backtrack_warning = summary.total_backtracks > config.backtrack_warning;
  summary.final_state = std::move(current);
  return summary;
}

}  // namespace jflow::flow
