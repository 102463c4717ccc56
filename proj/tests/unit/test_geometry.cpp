#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "jflow/errors.hpp"
#include "jflow/geometry.hpp"

using namespace jflow::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField field_of(const TorusGrid& g, double (*f)(std::span<const double>)) {
  return ScalarField::from_function(g, f);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

BaseForm identity_base(const TorusGrid& g, double a = 1.0) {
  return BaseForm(g, a * Eigen::MatrixXd::Identity(g.dim(), g.dim()), std::nullopt, g.dim());
}

}  // namespace

TEST_CASE("grid layout") {
  const TorusGrid g(3, 8);
  CHECK(g.size() == 512);
  CHECK(g.stride(2) == 1);
  CHECK(g.stride(0) == 64);
  CHECK(g.spacing() == doctest::Approx(2 * kPi / 8));
  const std::size_t p = 64 * 3 + 8 * 5 + 7;
  CHECK(g.multi_index(p) == std::vector<int>{3, 5, 7});
  CHECK(g.coordinate_index(p, 1) == 5);
  CHECK(g.coordinates(p)[2] == doctest::Approx(7 * g.spacing()));
  CHECK(g.volume() == doctest::Approx(std::pow(2 * kPi, 3)));
  CHECK_THROWS_AS(TorusGrid(1, 16), std::invalid_argument);
  CHECK_THROWS_AS(TorusGrid(2, 4), std::invalid_argument);
}

TEST_CASE("complex Hessian examples") {
  const TorusGrid g(2, 32);
  const auto zero = complex_hessian(ScalarField(g));
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j)
      for (double v : zero.entry(i, j)) REQUIRE(v == 0.0);

  const double h = g.spacing();
  const auto c1 = complex_hessian(field_of(g, [](std::span<const double> x) { return std::cos(x[0]); }));
  CHECK(c1.entry(0, 0)[0] == doctest::Approx(-0.25 * (2 - 2 * std::cos(h)) / (h * h)).epsilon(1e-14));
  CHECK(std::fabs(c1.entry(0, 0)[0] + 0.25) < 0.25 * h * h);

  const auto c12 =
      complex_hessian(field_of(g, [](std::span<const double> x) { return std::cos(x[0] + x[1]); }));
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto x = g.coordinates(p);
    worst = std::max(worst, std::fabs(c12.entry(0, 1)[p] + 0.25 * std::cos(x[0] + x[1])));
  }
  CHECK(worst < 0.25 * h * h);
}

TEST_CASE("Hessian error falls by four under refinement") {
  auto err = [](int N) {
    const TorusGrid g(2, N);
    const auto hess = complex_hessian(
        field_of(g, [](std::span<const double> x) { return std::cos(x[0] + 2 * x[1]); }));
    double worst = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto x = g.coordinates(p);
      const double c = std::cos(x[0] + 2 * x[1]);
      // (1/4) d_i d_j cos(f.x) = -(1/4) f_i f_j cos(f.x)
      worst = std::max(worst, std::fabs(hess.entry(0, 0)[p] + 0.25 * c));
      worst = std::max(worst, std::fabs(hess.entry(0, 1)[p] + 0.5 * c));
      worst = std::max(worst, std::fabs(hess.entry(1, 1)[p] + 1.0 * c));
    }
    return worst;
  };
  for (int N : {16, 32, 64}) {
    const double ratio = err(N) / err(2 * N);
    CAPTURE(N);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  }
}

TEST_CASE("Hessian commutes with grid shifts") {
  const TorusGrid g(3, 8);
  const auto u = testgen::smooth_field(g, 4, 1.0);
  for (int axis = 0; axis < 3; ++axis) {
    const auto shifted_then = complex_hessian(shift(u, axis, 3));
    const auto then_shifted = complex_hessian(u);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        const ScalarField e(g, std::vector<double>(then_shifted.entry(i, j).begin(),
                                                   then_shifted.entry(i, j).end()));
        const auto moved = shift(e, axis, 3);
        REQUIRE(max_abs_diff(shifted_then.entry(i, j), moved.values()) == 0.0);
      }
    }
  }
}

TEST_CASE("chi_u is affine in u") {
  const TorusGrid g(2, 16);
  const BaseForm base(g, Eigen::Matrix2d{{1.0, 0.2}, {0.2, 2.0}},
                      testgen::smooth_field(g, 8, 0.05), 2);
  const auto u = testgen::smooth_field(g, 1, 0.1);
  const auto w = testgen::smooth_field(g, 2, 0.1);
  ScalarField uw(g);
  for (std::size_t p = 0; p < g.size(); ++p) uw[p] = u[p] + w[p];
  const auto a = chi_u(base, uw);
  const auto b = chi_u(base, u);
  const auto hw = complex_hessian(w);
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      for (std::size_t p = 0; p < g.size(); ++p) {
        REQUIRE(std::fabs(a.entry(i, j)[p] - b.entry(i, j)[p] - hw.entry(i, j)[p]) < 1e-13);
      }
    }
  }
  const auto zero = chi_u(identity_base(g, 1.5), ScalarField(g));
  const auto spec = spectrum_field(zero);
  for (std::size_t p = 0; p < g.size(); ++p) {
    REQUIRE(spec.rank(0)[p] == 1.5);
    REQUIRE(spec.rank(1)[p] == 1.5);
  }
}

TEST_CASE("base form rejects spectra outside the cone") {
  const TorusGrid g(2, 16);
  const auto big = ScalarField::from_function(g, [](std::span<const double> x) { return 20.0 * std::cos(x[0]); });
  CHECK_THROWS_AS(BaseForm(g, Eigen::Matrix2d::Identity(), big, 2), jflow::ConeViolation);
  CHECK_THROWS_AS(BaseForm(g, Eigen::Matrix2d{{1.0, 0.5}, {0.0, 1.0}}, std::nullopt, 2),
                  std::invalid_argument);
}

TEST_CASE("spectra of small matrices") {
  auto single = [](const Eigen::MatrixXd& m) {
    const TorusGrid g(static_cast<int>(m.rows()), 8);
    HermitianPointField f(g);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = i; j < m.rows(); ++j)
        for (auto& v : f.entry(i, j)) v = m(i, j);
    return spectrum_field(f).point(0);
  };
  CHECK(single(Eigen::Matrix2d{{1, 0}, {0, 2}}) == std::vector<double>{1, 2});
  const auto anti = single(Eigen::Matrix2d{{0, 1}, {1, 0}});
  CHECK(anti[0] == doctest::Approx(-1.0));
  CHECK(anti[1] == doctest::Approx(1.0));

  // Random 3x3 and 4x4: rebuild from eigenpairs.
  std::mt19937_64 rng(31);
  std::normal_distribution<double> d;
  for (int n : {3, 4}) {
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = d(rng);
      const auto ev = single(a);
      for (int i = 0; i + 1 < n; ++i) REQUIRE(ev[static_cast<std::size_t>(i)] <= ev[static_cast<std::size_t>(i + 1)]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
      Eigen::MatrixXd rebuilt = es.eigenvectors() *
                                Eigen::Map<const Eigen::VectorXd>(ev.data(), n).asDiagonal() *
                                es.eigenvectors().transpose();
      REQUIRE((rebuilt - a).norm() < 1e-10);
    }
  }
}

TEST_CASE("integration examples") {
  for (int n : {2, 3}) {
    const TorusGrid g(n, 16);
    CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(std::pow(2 * kPi, n)).epsilon(1e-15));
    CHECK(std::fabs(integrate(field_of(g, [](std::span<const double> x) { return std::cos(x[0]); }))) < 1e-13);
  }
  const TorusGrid g(2, 16);
  const double c2 = integrate(field_of(g, [](std::span<const double> x) { return std::cos(x[0]) * std::cos(x[0]); }));
  CHECK(std::fabs(c2 - 0.5 * 4 * kPi * kPi) < 1e-12);
  const auto f = testgen::smooth_field(g, 6, 1.0);
  ScalarField ones(g, 1.0);
  CHECK(integrate_product(f, ones.values()) == doctest::Approx(integrate(f)).epsilon(1e-14));
}

TEST_CASE("snapshot round trip is bit exact") {
  const TorusGrid g(3, 8);
  auto f = testgen::smooth_field(g, 13, 1.0);
  f[5] = 1e-300;
  f[6] = -0.0;
  f[7] = 0.1 + 0.2;
  std::stringstream io;
  write_snapshot(io, f, "u", 0.125);
  const auto snap = read_snapshot(io);
  CHECK(snap.name == "u");
  CHECK(snap.time == 0.125);
  REQUIRE(snap.field.grid() == g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    REQUIRE(std::bit_cast<std::uint64_t>(snap.field[p]) == std::bit_cast<std::uint64_t>(f[p]));
  }
  std::stringstream bad("garbage\n");
  CHECK_THROWS(read_snapshot(bad));
}
