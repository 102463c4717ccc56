#pragma once

// Elementary symmetric polynomials of eigenvalue vectors and the pointwise
// quantities of the weighted-quotient flow built from them.
//
// Normalization: for a real (1,1)-form chi with eigenvalues lambda relative
// to omega, the top-degree coefficient of chi^m ^ omega^(n-m) relative to the
// volume element is m!(n-m)! sigma_m(lambda). sigma itself carries no
// prefactor; wedge_weight() supplies it.
//
// Indices into a spectrum are 0-based.

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace jflow::symfunc {

/// Largest complex dimension supported by the fixed-size scratch buffers.
inline constexpr int kMaxDim = 8;

/// Eigenvalues of a (1,1)-form relative to omega at one point.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> values);
  Spectrum(std::initializer_list<double> values) : Spectrum(std::vector<double>(values)) {}

  int dim() const noexcept { return static_cast<int>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }
  operator std::span<const double>() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Flow exponents. Single-quotient mode is chi^l / chi^k; weighted mode is
/// sum_m b_m chi^m / chi^k over m = 0..k-1.
class FlowIndices {
 public:
  /// Requires n >= k > l >= 1 and n <= kMaxDim.
  static FlowIndices single(int n, int k, int l);
  /// Requires weights.size() == k, b_m >= 0 and sum b_m > 0.
  static FlowIndices weighted(int n, int k, std::vector<double> weights);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  /// Set only in single-quotient mode.
  std::optional<int> l() const noexcept { return l_; }
  bool is_weighted() const noexcept { return !l_.has_value(); }
  /// b_0 .. b_{k-1}.
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  FlowIndices(int n, int k, std::optional<int> l, std::vector<double> weights)
      : n_(n), k_(k), l_(l), weights_(std::move(weights)) {}

  int n_;
  int k_;
  std::optional<int> l_;
  std::vector<double> weights_;
};

/// m!(n-m)!, the coefficient of chi^m ^ omega^(n-m) per unit sigma_m.
double wedge_weight(int n, int m);

/// sigma_m(lambda), 0 <= m <= n. sigma_0 = 1.
double sigma(int m, std::span<const double> lambda);

/// sigma_m of lambda with entry i removed; 0 <= m <= n-1, 0 <= i < n.
double sigma_minor(int m, std::span<const double> lambda, int i);

/// Fills out[0..max_m] with sigma_0..sigma_max_m (recurrence over entries).
void elementary(std::span<const double> lambda, int max_m, std::span<double> out);

/// Garding cone membership: sigma_j(lambda) > 0 for j = 1..k (strict).
bool in_gamma_k(std::span<const double> lambda, int k);

/// Pointwise flow quotient
///   sum_m b_m m!(n-m)! sigma_m / (k!(n-k)! sigma_k).
/// Throws ConeViolation if lambda is not in Gamma_k.
double quotient_rhs(std::span<const double> lambda, const FlowIndices& idx);

/// d quotient_rhs / d lambda_i for every i, written to grad (size n).
/// Throws ConeViolation if lambda is not in Gamma_k.
void quotient_gradient(std::span<const double> lambda, const FlowIndices& idx,
                       std::span<double> grad);

/// Per-direction pieces of the cone inequality at lambda:
///   dominant[i] = k (k-1)!(n-k)! sigma_{k-1}(lambda|i)
///   opposing[i] = sum_m b_m m (m-1)!(n-m)! sigma_{m-1}(lambda|i)
/// so that the (n-1,n-1)-form c k chi^{k-1} w^{n-k} - l chi^{l-1} w^{n-l} has
/// diagonal coefficients c * dominant[i] - opposing[i].
void cone_terms(std::span<const double> lambda, const FlowIndices& idx,
                std::span<double> dominant, std::span<double> opposing);

/// min_i (c * dominant[i] - opposing[i]); positive iff the cone inequality
/// holds at this point. Throws ConeViolation if lambda is not in Gamma_k.
double cone_margin(std::span<const double> lambda, double c, const FlowIndices& idx);
double cone_margin(std::span<const double> lambda, double c, int k, int l);

}  // namespace jflow::symfunc
