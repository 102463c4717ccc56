#include "jflow/conecheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include "jflow/parallel.hpp"

namespace jflow::conecheck {
namespace {

constexpr int kMaxDim = symfunc::kMaxDim;

struct RangeResult {
  std::size_t begin = 0;
  bool violated = false;
  std::size_t point = 0;
  double margin = std::numeric_limits<double>::infinity();
  double slack = std::numeric_limits<double>::infinity();
};

double objective(const ConeReport& r) {
  return r.gamma_k_ok ? r.min_margin : -std::numeric_limits<double>::infinity();
}

}  // namespace

double pointwise_slack(std::span<const double> lambda, double c, const FlowIndices& idx) {
  const auto n = lambda.size();
  std::array<double, kMaxDim> dominant{};
  std::array<double, kMaxDim> opposing{};
  symfunc::cone_terms(lambda, idx, std::span(dominant).first(n), std::span(opposing).first(n));
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) worst = std::min(worst, c - opposing[i] / dominant[i]);
  return 0.5 * worst;
}

ConeReport check_cone(const ScalarField& v, const BaseForm& base, const FlowIndices& idx,
                      double c) {
  const auto& grid = base.grid();
  if (!(v.grid() == grid)) throw std::invalid_argument("check_cone: grid mismatch");
  if (idx.n() != grid.dim()) throw std::invalid_argument("check_cone: dimension mismatch");
  const int n = grid.dim();
  const int k = idx.k();
  const auto spectra = geometry::spectrum_field(geometry::chi_u(base, v));

  std::vector<RangeResult> ranges;
  std::mutex guard;
  parallel::parallel_for(
      grid.size(),
      [&](std::size_t begin, std::size_t end) {
        RangeResult r;
        r.begin = begin;
        std::array<double, kMaxDim> lambda{};
        const auto lam = std::span(lambda).first(static_cast<std::size_t>(n));
        for (std::size_t p = begin; p < end; ++p) {
          spectra.point(p, lam);
          if (!symfunc::in_gamma_k(lam, k)) {
            r.violated = true;
            r.point = p;
            break;
          }
          const double margin = symfunc::cone_margin(lam, c, idx);
          if (margin < r.margin) {
            r.margin = margin;
            r.point = p;
          }
          r.slack = std::min(r.slack, pointwise_slack(lam, c, idx));
        }
        std::lock_guard lock(guard);
        ranges.push_back(r);
      },
      static_cast<std::size_t>(n * n));
  std::sort(ranges.begin(), ranges.end(),
            [](const RangeResult& a, const RangeResult& b) { return a.begin < b.begin; });

  ConeReport report(v);
  report.gamma_k_ok = true;
  report.min_margin = std::numeric_limits<double>::infinity();
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& r : ranges) {
    if (r.violated) {
      report.gamma_k_ok = false;
      report.argmin_point = r.point;
      break;
    }
    if (r.margin < report.min_margin) {
      report.min_margin = r.margin;
      report.argmin_point = r.point;
    }
    slack = std::min(slack, r.slack);
  }
  if (report.gamma_k_ok) {
    report.epsilon_slack = std::max(0.0, slack);
  } else {
    report.min_margin = std::numeric_limits<double>::quiet_NaN();
    report.epsilon_slack = 0.0;
  }
  report.argmin_index = grid.multi_index(report.argmin_point);
  report.argmin_coordinates = grid.coordinates(report.argmin_point);
  report.argmin_spectrum = spectra.point(report.argmin_point);
  return report;
}

std::vector<std::vector<int>> half_lattice(int n, int max_freq) {
  if (n < 1 || max_freq < 0) throw std::invalid_argument("half_lattice: bad arguments");
  std::vector<std::vector<int>> out;
  std::vector<int> f(static_cast<std::size_t>(n), -max_freq);
  while (true) {
    const auto first = std::find_if(f.begin(), f.end(), [](int x) { return x != 0; });
    if (first != f.end() && *first > 0) out.push_back(f);
    int axis = n - 1;
    while (axis >= 0 && f[static_cast<std::size_t>(axis)] == max_freq) {
      f[static_cast<std::size_t>(axis)] = -max_freq;
      --axis;
    }
    if (axis < 0) break;
    ++f[static_cast<std::size_t>(axis)];
  }
  return out;
}

ScalarField fourier_field(const TorusGrid& grid, const std::vector<FourierMode>& modes) {
  for (const auto& m : modes) {
    if (static_cast<int>(m.frequency.size()) != grid.dim()) {
      throw std::invalid_argument("fourier_field: frequency dimension mismatch");
    }
  }
  return ScalarField::from_function(grid, [&](std::span<const double> x) {
    double acc = 0.0;
    for (const auto& m : modes) {
      double phase = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) phase += m.frequency[i] * x[i];
      if (m.cos_coeff != 0.0) acc += m.cos_coeff * std::cos(phase);
      if (m.sin_coeff != 0.0) acc += m.sin_coeff * std::sin(phase);
    }
    return acc;
  });
}

ConeReport search_cone(const BaseForm& base, const FlowIndices& idx, double c,
                       const SearchOptions& options) {
  const auto& grid = base.grid();
  if (options.budget == 0) throw std::invalid_argument("search_cone: budget must be positive");
  if (!(options.initial_step > 0.0)) {
    throw std::invalid_argument("search_cone: initial_step must be positive");
  }

  std::vector<FourierMode> modes;
  for (auto& f : half_lattice(grid.dim(), options.max_freq)) {
    modes.push_back({std::move(f), 0.0, 0.0});
  }
  if (!options.start.empty()) {
    if (options.start.size() != modes.size()) {
      throw std::invalid_argument("search_cone: start does not match the Fourier basis");
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (options.start[i].frequency != modes[i].frequency) {
        throw std::invalid_argument("search_cone: start does not match the Fourier basis");
      }
      modes[i].cos_coeff = options.start[i].cos_coeff;
      modes[i].sin_coeff = options.start[i].sin_coeff;
    }
  }

  // Coordinate j addresses the cosine (even j) or sine (odd j) coefficient
  // of mode j / 2.
  const auto coeff = [&](std::vector<FourierMode>& m, std::size_t j) -> double& {
    return j % 2 == 0 ? m[j / 2].cos_coeff : m[j / 2].sin_coeff;
  };
  std::vector<std::size_t> order(2 * modes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
  }

  std::size_t evaluations = 1;
  ConeReport best = check_cone(fourier_field(grid, modes), base, idx, c);
  double best_value = objective(best);
  std::vector<FourierMode> best_modes = modes;

  double step = options.initial_step;
  while (evaluations < options.budget && step >= options.min_step) {
    bool improved = false;
    for (std::size_t j : order) {
      for (double sign : {1.0, -1.0}) {
        if (evaluations >= options.budget) break;
        auto trial = best_modes;
        coeff(trial, j) += sign * step;
        ConeReport r = check_cone(fourier_field(grid, trial), base, idx, c);
        ++evaluations;
        const double value = objective(r);
        if (value > best_value) {
          best = std::move(r);
          best_value = value;
          best_modes = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }

  best.fourier_coeffs = std::move(best_modes);
  best.evaluations = evaluations;
  return best;
}

}  // namespace jflow::conecheck
