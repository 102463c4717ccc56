#pragma once

// Run configuration: a line-oriented "key = value" document.
//
//   # comment
//   scenario = classical-jflow
//   n = 2
//   k = 2
//   l = 1                      # or: weights = 0.5 1   (b_0 .. b_{k-1})
//   base.matrix = 1 0; 0 2     # rows separated by ';', default identity
//   base.potential = 0.05 1 1  # terms "amp f_1 .. f_n [phase]" joined by ';'
//   grid.N = 64
//
// Potentials are sums of amp * cos(f . x + phase). Unknown keys, repeated
// keys and constraint violations are rejected with the offending line.

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jflow/flow.hpp"
#include "jflow/geometry.hpp"
#include "jflow/symfunc.hpp"

namespace jflow::config {

struct PotentialTerm {
  double amplitude = 0.0;
  std::vector<int> frequency;
  double phase = 0.0;
};

geometry::ScalarField potential_field(const geometry::TorusGrid& grid,
                                      const std::vector<PotentialTerm>& terms);

struct RunConfig {
  std::string scenario = "custom";
  int n = 2;
  int k = 2;
  std::optional<int> l;
  std::vector<double> weights;
  /// Row-major n x n; identity when empty.
  std::vector<double> base_matrix;
  std::vector<PotentialTerm> base_potential;
  std::vector<PotentialTerm> initial_potential;
  int grid_N = 32;

  double dt_initial = 1e-2;
  double dt_min = 1e-9;
  double safety = 0.9;
  double t_max = 100.0;
  double residual_tol = 1e-8;
  flow::Integrator integrator = flow::Integrator::Rk4;
  std::size_t max_steps = 5'000'000;
  std::size_t backtrack_warning = 32;

  std::string output_dir = "jflow_out";
  /// Snapshot of u every this many steps; 0 keeps only the final one.
  std::size_t snapshot_every = 0;
  /// CSV row every this many steps (the first and last are always written).
  std::size_t report_every = 10;
  std::uint64_t seed = 0;

  std::size_t search_budget = 400;
  int search_max_freq = 2;
  double search_step = 0.05;

  /// Keys that were not given and took their default.
  std::vector<std::string> defaulted;

  symfunc::FlowIndices indices() const;
  /// Throws ConeViolation if the base leaves Gamma_k somewhere.
  geometry::BaseForm base_form() const;
  flow::FlowConfig flow_config() const;
  /// Every field, defaults included.
  nlohmann::json to_json() const;
};

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& known_keys();

/// Parses a document, then applies `overrides` ("key=value", later wins
/// over the document). Throws ConfigError with the line (or override) that
/// failed.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

std::vector<std::string> preset_names();
/// Config document of a named preset; ConfigError if unknown.
std::string preset_text(std::string_view name);

}  // namespace jflow::config
