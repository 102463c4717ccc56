#pragma once

// Brute-force references for the main library. Nothing here shares code with
// the symmetric-function or wedge-weight paths it is used to check.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "jflow/geometry.hpp"

namespace oracle {

/// Sum over all m-subsets of the product of their entries; n <= 12.
double sigma_bruteforce(int m, std::span<const double> lambda);

/// Exterior algebra over the 2n generators dz_1..dz_n, dzbar_1..dzbar_n.
/// Monomials are bitmasks with bit i = dz_{i+1}, bit n+i = dzbar_{i+1},
/// stored in increasing bit order.
class Form {
 public:
  explicit Form(int n) : n_(n) {}

  int dim() const noexcept { return n_; }
  const std::map<std::uint32_t, double>& terms() const noexcept { return terms_; }
  void add(std::uint32_t monomial, double coeff);
  double coeff(std::uint32_t monomial) const;

  /// sum_{i,j} a[i][j] dz_i ^ dzbar_j for a row-major n x n matrix.
  static Form one_one(int n, std::span<const double> a);
  static Form diagonal(std::span<const double> lambda);
  static Form identity(int n);
  static Form unit(int n);

  Form wedge(const Form& other) const;
  Form power(int p) const;

 private:
  int n_;
  std::map<std::uint32_t, double> terms_;
};

/// Top-degree coefficient of (sum lambda_i e_i)^m ^ (sum e_i)^(n-m) relative
/// to e_1 ^ .. ^ e_n, e_i = dz_i ^ dzbar_i. n <= 4.
double wedge_top_coeff(int m, std::span<const double> lambda);

/// Top coefficient of A_1 ^ .. ^ A_n relative to e_1 ^ .. ^ e_n for n real
/// symmetric (1,1)-forms given as row-major matrices.
double mixed_top_coeff(int n, const std::vector<std::vector<double>>& factors);

/// Coefficients of the diagonal (n-1,n-1)-form
///   c k chi^(k-1) ^ w^(n-k) - sum_m b_m m chi^(m-1) ^ w^(n-m)
/// against the monomials prod_{j != i} e_j, for chi = diag(lambda).
std::vector<double> cone_form_coefficients(std::span<const double> lambda, double c, int k,
                                           std::span<const double> weights);

/// True iff every coefficient of the form above is strictly positive, with
/// b_l = 1 and all other weights zero.
bool form_positivity_n1(std::span<const double> lambda, double c, int k, int l);

/// Central differences (J_m(u + eps w) - J_m(u - eps w)) / (2 eps) for each
/// eps, with J_m the library's path-quadrature functional.
std::vector<double> fd_functional_derivative(const jflow::geometry::ScalarField& u,
                                             const jflow::geometry::ScalarField& w,
                                             const jflow::geometry::BaseForm& base, int m,
                                             std::span<const double> eps);

/// Observed convergence orders log2(err(eps_i) / err(eps_{i+1})) for a
/// sequence of halving eps.
std::vector<double> observed_orders(std::span<const double> errors);

}  // namespace oracle
