#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>

#include "jflow/config.hpp"
#include "jflow/errors.hpp"

using namespace jflow::config;
using jflow::ConfigError;

namespace {

std::string error_of(std::string_view text, const std::vector<std::string>& overrides = {}) {
  try {
    (void)parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, std::string_view part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("minimal config takes every other key from the defaults") {
  const auto c = parse_config("n = 2\nk = 2\nl = 1\n");
  CHECK(c.n == 2);
  CHECK(c.l == 1);
  CHECK(c.grid_N == 32);
  CHECK(c.integrator == jflow::flow::Integrator::Rk4);
  CHECK(std::find(c.defaulted.begin(), c.defaulted.end(), "grid.N") != c.defaulted.end());
  CHECK(std::find(c.defaulted.begin(), c.defaulted.end(), "n") == c.defaulted.end());
  const auto base = c.base_form();
  CHECK(base.constant_part().isIdentity());
  const auto j = c.to_json();
  CHECK(j.at("grid.N") == 32);
}

TEST_CASE("comments, spacing and overrides") {
  const auto c = parse_config(
      "# header\n\n  n=3   \nk = 2 # trailing\nl = 1\nbase.matrix = 1 0 0; 0 2 0; 0 0 3\n"
      "base.potential = 0.05 1 0 0; 0.02 0 1 1 0.5\ngrid.N = 16\n",
      {"grid.N=8", "integrator=euler"});
  CHECK(c.grid_N == 8);
  CHECK(c.integrator == jflow::flow::Integrator::Euler);
  REQUIRE(c.base_potential.size() == 2);
  CHECK(c.base_potential[1].phase == 0.5);
  CHECK(c.base_potential[1].frequency == std::vector<int>{0, 1, 1});
  CHECK(c.base_matrix.size() == 9);
}

TEST_CASE("invalid index combinations are rejected with the constraint") {
  const auto e = error_of("n = 2\nk = 2\nl = 2\n");
  CHECK(contains(e, "line 3"));
  CHECK(contains(e, "n >= k > l >= 1"));
  CHECK(contains(error_of("n = 2\nk = 3\nl = 1\n"), "n >= k > l >= 1"));
  CHECK(contains(error_of("n = 2\nk = 2\nweights = 0 0\n"), "positive sum"));
  CHECK(contains(error_of("n = 2\nk = 2\nweights = 1 -1\n"), "non-negative"));
  CHECK(contains(error_of("n = 2\nk = 2\nl = 1\nweights = 1 1\n"), "not both"));
  CHECK(contains(error_of("n = 2\nk = 2\n"), "required"));
}

TEST_CASE("unknown and repeated keys cite the line") {
  const auto e = error_of("n = 2\nk = 2\nl = 1\n\ngrid.M = 16\n");
  CHECK(contains(e, "line 5"));
  CHECK(contains(e, "grid.M"));
  CHECK(contains(error_of("n = 2\nn = 2\n"), "line 2"));
  CHECK(contains(error_of("n = 2\nk = 2\nl = 1\n", {"nope=1"}), "override 'nope=1'"));
  CHECK(contains(error_of("n = 2\nk 2\n"), "line 2"));
}

TEST_CASE("value validation") {
  const std::string head = "n = 2\nk = 2\nl = 1\n";
  CHECK(contains(error_of(head + "grid.N = 4\n"), "grid.N"));
  CHECK(contains(error_of(head + "grid.N = abc\n"), "line 4"));
  CHECK(contains(error_of(head + "base.matrix = 1 2; 3 4\n"), "symmetric"));
  CHECK(contains(error_of(head + "base.matrix = 1 0 0\n"), "2 x 2"));
  CHECK(contains(error_of(head + "base.potential = 0.1 1\n"), "frequencies"));
  CHECK(contains(error_of(head + "integrator = midpoint\n"), "integrator"));
  CHECK(contains(error_of(head + "dt_min = 1\n"), "dt_min"));
}

TEST_CASE("presets parse and name their scenario") {
  const auto names = preset_names();
  CHECK(names.size() >= 5);
  for (const auto& name : names) {
    CAPTURE(name);
    const auto c = parse_config(preset_text(name));
    CHECK(c.scenario == name);
    CHECK_NOTHROW((void)c.base_form());
  }
  CHECK_THROWS_AS(preset_text("missing"), ConfigError);
  const auto w = parse_config(preset_text("weighted"));
  CHECK(w.indices().is_weighted());
  CHECK(w.weights[0] > 0.0);
  CHECK(w.weights[1] > 0.0);
}

TEST_CASE("known keys cover the documented schema") {
  const auto& keys = known_keys();
  for (const char* k : {"scenario", "n", "k", "l", "weights", "base.matrix", "base.potential",
                        "initial.potential", "grid.N", "dt_initial", "dt_min", "safety", "t_max",
                        "residual_tol", "integrator", "max_steps", "output.dir", "seed",
                        "search.budget"}) {
    CHECK(std::find(keys.begin(), keys.end(), k) != keys.end());
  }
}
