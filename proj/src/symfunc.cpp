#include "jflow/symfunc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "jflow/errors.hpp"

namespace jflow::symfunc {
namespace {

using Scratch = std::array<double, kMaxDim + 1>;

constexpr std::array<double, kMaxDim + 1> kFactorial = [] {
  std::array<double, kMaxDim + 1> f{};
  f[0] = 1.0;
  for (int i = 1; i <= kMaxDim; ++i) f[i] = f[i - 1] * i;
  return f;
}();

void check_dim(std::span<const double> lambda) {
  if (lambda.empty() || lambda.size() > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("spectrum length " + std::to_string(lambda.size()) +
                                " outside [1, " + std::to_string(kMaxDim) + "]");
  }
}

// e[0..max_m] of lambda, skipping entry `skip` (or none if skip < 0).
void accumulate_elementary(std::span<const double> lambda, int max_m, int skip, double* e) {
  e[0] = 1.0;
  for (int j = 1; j <= max_m; ++j) e[j] = 0.0;
  int seen = 0;
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    if (i == skip) continue;
    ++seen;
    const double x = lambda[i];
    for (int j = std::min(seen, max_m); j >= 1; --j) e[j] += x * e[j - 1];
  }
}

[[noreturn]] void throw_outside_cone(std::span<const double> lambda, int k) {
  std::string msg = "spectrum (";
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i) msg += ", ";
    msg += std::to_string(lambda[i]);
  }
  msg += ") is not in Gamma_" + std::to_string(k);
  throw ConeViolation(msg, std::vector<double>(lambda.begin(), lambda.end()));
}

bool positive_through(const double* e, int k) {
  for (int j = 1; j <= k; ++j) {
    if (!(e[j] > 0.0)) return false;
  }
  return true;
}

void check_indices(std::span<const double> lambda, const FlowIndices& idx) {
  if (static_cast<int>(lambda.size()) != idx.n()) {
    throw std::invalid_argument("spectrum length " + std::to_string(lambda.size()) +
                                " does not match n = " + std::to_string(idx.n()));
  }
}

}  // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2 || values_.size() > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("spectrum dimension must lie in [2, " +
                                std::to_string(kMaxDim) + "]");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("spectrum entries must be finite");
  }
}

FlowIndices FlowIndices::single(int n, int k, int l) {
  if (!(n >= k && k > l && l >= 1) || n > kMaxDim) {
    throw std::invalid_argument("flow indices must satisfy n >= k > l >= 1 (got n=" +
                                std::to_string(n) + ", k=" + std::to_string(k) +
                                ", l=" + std::to_string(l) + ")");
  }
  if (n < 2) throw std::invalid_argument("complex dimension must be at least 2");
  std::vector<double> w(static_cast<std::size_t>(k), 0.0);
  w[static_cast<std::size_t>(l)] = 1.0;
  return FlowIndices(n, k, l, std::move(w));
}

FlowIndices FlowIndices::weighted(int n, int k, std::vector<double> weights) {
  if (n < 2 || n > kMaxDim || k < 1 || k > n) {
    throw std::invalid_argument("weighted flow requires 2 <= n <= " + std::to_string(kMaxDim) +
                                " and 1 <= k <= n");
  }
  if (weights.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("weighted flow needs exactly k = " + std::to_string(k) +
                                " weights b_0..b_{k-1}");
  }
  double total = 0.0;
  for (double b : weights) {
    if (!std::isfinite(b) || b < 0.0) {
      throw std::invalid_argument("weights must be finite and non-negative");
    }
    total += b;
  }
  if (!(total > 0.0)) throw std::invalid_argument("weights must have a positive sum");
  return FlowIndices(n, k, std::nullopt, std::move(weights));
}

double wedge_weight(int n, int m) {
  if (m < 0 || m > n || n > kMaxDim) throw std::invalid_argument("wedge_weight: bad (n, m)");
  return kFactorial[m] * kFactorial[n - m];
}

double sigma(int m, std::span<const double> lambda) {
  check_dim(lambda);
  if (m < 0 || m > static_cast<int>(lambda.size())) {
    throw std::invalid_argument("sigma: degree " + std::to_string(m) + " out of range");
  }
  Scratch e;
  accumulate_elementary(lambda, m, -1, e.data());
  return e[m];
}

double sigma_minor(int m, std::span<const double> lambda, int i) {
  check_dim(lambda);
  const int n = static_cast<int>(lambda.size());
  if (i < 0 || i >= n) {
    throw std::out_of_range("sigma_minor: index " + std::to_string(i) + " out of range");
  }
  if (m < 0 || m > n - 1) {
    throw std::invalid_argument("sigma_minor: degree " + std::to_string(m) + " out of range");
  }
  Scratch e;
  accumulate_elementary(lambda, m, i, e.data());
  return e[m];
}

void elementary(std::span<const double> lambda, int max_m, std::span<double> out) {
  check_dim(lambda);
  if (max_m < 0 || max_m > static_cast<int>(lambda.size()) ||
      out.size() < static_cast<std::size_t>(max_m + 1)) {
    throw std::invalid_argument("elementary: bad degree or output size");
  }
  accumulate_elementary(lambda, max_m, -1, out.data());
}

bool in_gamma_k(std::span<const double> lambda, int k) {
  check_dim(lambda);
  if (k < 1 || k > static_cast<int>(lambda.size())) {
    throw std::invalid_argument("in_gamma_k: k out of range");
  }
  Scratch e;
  accumulate_elementary(lambda, k, -1, e.data());
  return positive_through(e.data(), k);
}

double quotient_rhs(std::span<const double> lambda, const FlowIndices& idx) {
  check_indices(lambda, idx);
  const int n = idx.n();
  const int k = idx.k();
  Scratch e;
  accumulate_elementary(lambda, k, -1, e.data());
  if (!positive_through(e.data(), k)) throw_outside_cone(lambda, k);
  const auto b = idx.weights();
  double numer = 0.0;
  for (int m = 0; m < k; ++m) {
    if (b[m] != 0.0) numer += b[m] * wedge_weight(n, m) * e[m];
  }
  return numer / (wedge_weight(n, k) * e[k]);
}

void quotient_gradient(std::span<const double> lambda, const FlowIndices& idx,
                       std::span<double> grad) {
  check_indices(lambda, idx);
  const int n = idx.n();
  const int k = idx.k();
  if (grad.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("quotient_gradient: output size must be n");
  }
  Scratch e;
  accumulate_elementary(lambda, k, -1, e.data());
  if (!positive_through(e.data(), k)) throw_outside_cone(lambda, k);
  const auto b = idx.weights();
  const double denom = wedge_weight(n, k) * e[k];
  double numer = 0.0;
  for (int m = 0; m < k; ++m) numer += b[m] * wedge_weight(n, m) * e[m];
  const double q = numer / denom;

  Scratch minor;
  for (int i = 0; i < n; ++i) {
    accumulate_elementary(lambda, k - 1, i, minor.data());
    double d_numer = 0.0;
    for (int m = 1; m < k; ++m) d_numer += b[m] * wedge_weight(n, m) * minor[m - 1];
    grad[i] = (d_numer - q * wedge_weight(n, k) * minor[k - 1]) / denom;
  }
}

void cone_terms(std::span<const double> lambda, const FlowIndices& idx,
                std::span<double> dominant, std::span<double> opposing) {
  check_indices(lambda, idx);
  const int n = idx.n();
  const int k = idx.k();
  if (dominant.size() != static_cast<std::size_t>(n) ||
      opposing.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("cone_terms: output size must be n");
  }
  const auto b = idx.weights();
  // m (m-1)! (n-m)! == m! (n-m)!
  Scratch minor;
  for (int i = 0; i < n; ++i) {
    accumulate_elementary(lambda, k - 1, i, minor.data());
    dominant[i] = wedge_weight(n, k) * minor[k - 1];
    double opp = 0.0;
    for (int m = 1; m < k; ++m) {
      if (b[m] != 0.0) opp += b[m] * wedge_weight(n, m) * minor[m - 1];
    }
    opposing[i] = opp;
  }
}

double cone_margin(std::span<const double> lambda, double c, const FlowIndices& idx) {
  check_indices(lambda, idx);
  if (!in_gamma_k(lambda, idx.k())) throw_outside_cone(lambda, idx.k());
  std::array<double, kMaxDim> dominant;
  std::array<double, kMaxDim> opposing;
  const auto n = static_cast<std::size_t>(idx.n());
  cone_terms(lambda, idx, std::span(dominant).first(n), std::span(opposing).first(n));
  double margin = c * dominant[0] - opposing[0];
  for (std::size_t i = 1; i < n; ++i) margin = std::min(margin, c * dominant[i] - opposing[i]);
  return margin;
}

double cone_margin(std::span<const double> lambda, double c, int k, int l) {
  check_dim(lambda);
  return cone_margin(lambda, c, FlowIndices::single(static_cast<int>(lambda.size()), k, l));
}

}  // namespace jflow::symfunc
