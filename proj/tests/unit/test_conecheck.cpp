#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "generators.hpp"
#include "jflow/conecheck.hpp"
#include "jflow/config.hpp"
#include "jflow/functionals.hpp"

using namespace jflow::conecheck;

namespace {

BaseForm diag_base(int N) {
  return BaseForm(TorusGrid(2, N), Eigen::Matrix2d{{1, 0}, {0, 2}}, std::nullopt, 2);
}

const auto kIdx = FlowIndices::single(2, 2, 1);

}  // namespace

TEST_CASE("constant base worked example") {
  const auto base = diag_base(16);
  const auto r = check_cone(ScalarField(base.grid()), base, kIdx, 0.75);
  CHECK(r.gamma_k_ok);
  CHECK(r.min_margin == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.certified());
  // Slack: min over directions of (0.75 - opposing/dominant) / 2 with
  // dominant = (2 * 2, 2 * 1), opposing = 1.
  CHECK(r.epsilon_slack == doctest::Approx(0.5 * (0.75 - 0.5)).epsilon(1e-14));
  CHECK(r.argmin_spectrum == std::vector<double>{1, 2});
}

TEST_CASE("margin is invariant under adding a constant to v") {
  const auto base = diag_base(32);
  const auto v = testgen::smooth_field(base.grid(), 17, 0.3);
  auto w = v;
  for (auto& x : w.values()) x += 2.5;
  const auto a = check_cone(v, base, kIdx, 0.75);
  const auto b = check_cone(w, base, kIdx, 0.75);
  CHECK(a.gamma_k_ok == b.gamma_k_ok);
  // Equal up to the rounding of u + const in the stencil.
  CHECK(a.min_margin == doctest::Approx(b.min_margin).epsilon(1e-12));
  CHECK(a.epsilon_slack == doctest::Approx(b.epsilon_slack).epsilon(1e-12));
  const double exact = check_cone(v, base, kIdx, 0.75).min_margin;
  CHECK(exact == a.min_margin);
}

TEST_CASE("slack is monotone in c") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto lambda = testgen::gamma_k_point(rng, 3, 2);
    const auto idx = FlowIndices::single(3, 2, 1);
    const double lo = pointwise_slack(lambda, 0.4, idx);
    const double hi = pointwise_slack(lambda, 0.9, idx);
    REQUIRE(hi > lo);
    REQUIRE(hi - lo == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("large candidates leave Gamma_k at the predicted amplitude") {
  const auto base = BaseForm(TorusGrid(2, 32), Eigen::Matrix2d::Identity(), std::nullopt, 2);
  const double h = base.grid().spacing();
  const double symbol = (2.0 - 2.0 * std::cos(h)) / (h * h);
  auto ok = [&](double amp) {
    const auto v = ScalarField::from_function(
        base.grid(), [amp](std::span<const double> x) { return amp * std::cos(x[0]); });
    return check_cone(v, base, kIdx, 1.0).gamma_k_ok;
  };
  double lo = 0.0, hi = 10.0;
  REQUIRE(ok(lo));
  REQUIRE_FALSE(ok(hi));
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  // chi_11 = 1 - (amp/4) symbol cos(x_1) vanishes first at x_1 = 0.
  CHECK(lo == doctest::Approx(4.0 / symbol).epsilon(1e-10));
  const auto v = ScalarField::from_function(
      base.grid(), [hi](std::span<const double> x) { return hi * 1.01 * std::cos(x[0]); });
  const auto r = check_cone(v, base, kIdx, 1.0);
  CHECK_FALSE(r.gamma_k_ok);
  CHECK(std::isnan(r.min_margin));
  CHECK(r.argmin_index[0] == 0);
  CHECK_FALSE(r.certified());
}

TEST_CASE("half lattice") {
  const auto f = half_lattice(2, 1);
  CHECK(f.size() == 4);
  std::set<std::vector<int>> seen(f.begin(), f.end());
  CHECK(seen.size() == f.size());
  for (const auto& x : f) {
    std::vector<int> neg{-x[0], -x[1]};
    CHECK(seen.count(neg) == 0);
  }
  CHECK(half_lattice(3, 2).size() == (125 - 1) / 2);
}

TEST_CASE("search never does worse than the start") {
  const auto rc = jflow::config::parse_config(jflow::config::preset_text("classical-jflow"),
                                              {"grid.N=16"});
  const auto base = rc.base_form();
  const auto idx = rc.indices();
  const double c = jflow::functionals::normalization_c(base, idx);
  const auto zero = check_cone(ScalarField(base.grid()), base, idx, c);
  SearchOptions opts;
  opts.budget = 60;
  opts.max_freq = 1;
  const auto found = search_cone(base, idx, c, opts);
  CHECK(found.min_margin >= zero.min_margin);
  CHECK(found.evaluations <= opts.budget);
  CHECK(found.certified());
  CHECK(found.fourier_coeffs.size() == half_lattice(2, 1).size());
  // Reproducible from the seed.
  const auto again = search_cone(base, idx, c, opts);
  CHECK(again.min_margin == found.min_margin);
}

TEST_CASE("symmetric-seeded search keeps the reflection symmetry of an even base") {
  const TorusGrid g(2, 16);
  const auto rho = ScalarField::from_function(
      g, [](std::span<const double> x) { return 0.3 * std::cos(x[0]) + 0.2 * std::cos(x[0] + x[1]); });
  const BaseForm base(g, Eigen::Matrix2d{{1, 0}, {0, 2}}, rho, 2);
  const double c = jflow::functionals::normalization_c(base, kIdx);
  SearchOptions opts;
  opts.budget = 80;
  opts.max_freq = 1;
  const auto found = search_cone(base, kIdx, c, opts);
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    auto idx = g.multi_index(p);
    const std::size_t q = ((g.points_per_dim() - idx[0]) % g.points_per_dim()) * g.stride(0) +
                          (g.points_per_dim() - idx[1]) % g.points_per_dim();
    worst = std::max(worst, std::fabs(found.v[p] - found.v[q]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("adversarial base is not certified") {
  const auto rc = jflow::config::parse_config(jflow::config::preset_text("adversarial"));
  const auto base = rc.base_form();
  const auto idx = rc.indices();
  const double c = jflow::functionals::normalization_c(base, idx);
  SearchOptions opts;
  opts.budget = rc.search_budget;
  opts.max_freq = rc.search_max_freq;
  const auto found = search_cone(base, idx, c, opts);
  CHECK(found.min_margin <= 0.0);
  CHECK_FALSE(found.certified());
}
