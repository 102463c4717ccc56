#pragma once

// Hand-rolled generators for the property tests. Everything is driven by an
// explicit seed so failures reproduce.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "jflow/geometry.hpp"
#include "jflow/symfunc.hpp"

namespace testgen {

inline std::vector<double> uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = d(rng);
  return v;
}

// Rejection sample of Gamma_k: uniform box, biased towards the positive
// orthant so the acceptance rate stays reasonable for k close to n.
inline std::vector<double> gamma_k_point(std::mt19937_64& rng, int n, int k) {
  for (;;) {
    auto v = uniform_vector(rng, n, -1.0, 4.0);
    if (jflow::symfunc::in_gamma_k(v, k)) return v;
  }
}

// Random trigonometric polynomial with |f_i| <= max_freq and decaying
// coefficients; zero mean.
inline jflow::geometry::ScalarField smooth_field(const jflow::geometry::TorusGrid& grid,
                                                 std::uint64_t seed, double amplitude,
                                                 int max_freq = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const int n = grid.dim();
  struct Term {
    std::vector<int> f;
    double a, b;
  };
  std::vector<Term> terms;
  std::vector<int> f(static_cast<std::size_t>(n), -max_freq);
  for (;;) {
    bool nonzero = false;
    for (int x : f) nonzero = nonzero || x != 0;
    if (nonzero) {
      double norm2 = 0.0;
      for (int x : f) norm2 += x * x;
      const double a = coeff(rng) / (1.0 + norm2);
      const double b = coeff(rng) / (1.0 + norm2);
      terms.push_back({f, a, b});
    }
    std::size_t axis = 0;
    while (axis < f.size() && ++f[axis] > max_freq) f[axis++] = -max_freq;
    if (axis == f.size()) break;
  }
  return jflow::geometry::ScalarField::from_function(grid, [&](std::span<const double> x) {
    double acc = 0.0;
    for (const auto& t : terms) {
      double phase = 0.0;
      for (std::size_t i = 0; i < t.f.size(); ++i) phase += t.f[i] * x[i];
      acc += t.a * std::cos(phase) + t.b * std::sin(phase);
    }
    return amplitude * acc;
  });
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

}  // namespace testgen
