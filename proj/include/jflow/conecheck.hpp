#pragma once

// Pointwise cone condition for candidates chi' = chi + sqrt(-1) d dbar v,
// and a search for a certifying v over a truncated Fourier basis.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jflow/geometry.hpp"
#include "jflow/symfunc.hpp"

namespace jflow::conecheck {

using geometry::BaseForm;
using geometry::ScalarField;
using geometry::TorusGrid;
using symfunc::FlowIndices;

/// a cos(f.x) + b sin(f.x)
struct FourierMode {
  std::vector<int> frequency;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

struct ConeReport {
  explicit ConeReport(ScalarField candidate) : v(std::move(candidate)) {}

  ScalarField v;
  bool gamma_k_ok = false;
  /// min over points and directions of c * dominant - opposing; NaN when
  /// gamma_k_ok is false.
  double min_margin = 0.0;
  /// Point attaining min_margin, or the first point outside Gamma_k.
  std::size_t argmin_point = 0;
  std::vector<int> argmin_index;
  std::vector<double> argmin_coordinates;
  std::vector<double> argmin_spectrum;
  /// Largest eps with (c - 2 eps) * dominant > opposing everywhere; 0 if none.
  double epsilon_slack = 0.0;
  /// Coefficients of v when it came from a Fourier search; empty otherwise.
  std::vector<FourierMode> fourier_coeffs;
  /// check_cone calls spent producing this report.
  std::size_t evaluations = 1;

  bool certified() const noexcept { return gamma_k_ok && min_margin > 0.0; }
};

/// Fails fast (gamma_k_ok = false, lowest offending point) if chi_v leaves
/// Gamma_k. Throws std::invalid_argument on grid mismatch.
ConeReport check_cone(const ScalarField& v, const BaseForm& base, const FlowIndices& idx,
                      double c);

/// Per-point slack bound (c - opposing/dominant) / 2 minimised over
/// directions; may be negative.
double pointwise_slack(std::span<const double> lambda, double c, const FlowIndices& idx);

/// Frequencies f with |f_i| <= max_freq, one from each +-f pair (first nonzero
/// entry positive), in lexicographic order.
std::vector<std::vector<int>> half_lattice(int n, int max_freq);

ScalarField fourier_field(const TorusGrid& grid, const std::vector<FourierMode>& modes);

struct SearchOptions {
  /// Maximum number of check_cone evaluations, including the start point.
  std::size_t budget = 400;
  int max_freq = 2;
  double initial_step = 0.05;
  double min_step = 1e-6;
  /// Orders the coordinate sweep.
  std::uint64_t seed = 0;
  /// Starting coefficients; zero when empty. Must match half_lattice order.
  std::vector<FourierMode> start;
};

/// Coordinate ascent of min_margin over the coefficients of v. Each sweep
/// probes +-step along every coordinate and keeps strict improvements; the
/// step halves after a sweep without progress. Candidates leaving Gamma_k
/// count as -infinity.
ConeReport search_cone(const BaseForm& base, const FlowIndices& idx, double c,
                       const SearchOptions& options = {});

}  // namespace jflow::conecheck
