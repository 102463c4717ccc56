#include "oracle/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "jflow/functionals.hpp"

namespace oracle {
namespace {

// Sign of the permutation that sorts the concatenation a ++ b into increasing
// order: (-1)^(number of pairs x in a, y in b with x > y).
int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (std::uint32_t rest = b; rest != 0; rest &= rest - 1) {
    const int y = std::countr_zero(rest);
    inversions += std::popcount(a >> (y + 1));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

std::uint32_t dz(int i) { return 1u << i; }
std::uint32_t dzbar(int n, int i) { return 1u << (n + i); }

// Coefficient of the monomial prod_{i in set} e_i (in increasing i) written
// in sorted bit order.
double reference_sign(int n, std::uint32_t index_set) {
  Form acc = Form::unit(n);
  for (int i = 0; i < n; ++i) {
    if ((index_set >> i & 1u) == 0) continue;
    Form e(n);
    e.add(dz(i) | dzbar(n, i), merge_sign(dz(i), dzbar(n, i)));
    acc = acc.wedge(e);
  }
  std::uint32_t mask = 0;
  for (int i = 0; i < n; ++i) {
    if (index_set >> i & 1u) mask |= dz(i) | dzbar(n, i);
  }
  return acc.coeff(mask);
}

}  // namespace

double sigma_bruteforce(int m, std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n > 12) throw std::invalid_argument("sigma_bruteforce: n must be <= 12");
  if (m < 0 || m > n) throw std::invalid_argument("sigma_bruteforce: m out of range");
  double total = 0.0;
  for (std::uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) != m) continue;
    double prod = 1.0;
    for (int i = 0; i < n; ++i) {
      if (s >> i & 1u) prod *= lambda[static_cast<std::size_t>(i)];
    }
    total += prod;
  }
  return total;
}

void Form::add(std::uint32_t monomial, double coeff) {
  if (coeff == 0.0) return;
  terms_[monomial] += coeff;
}

double Form::coeff(std::uint32_t monomial) const {
  const auto it = terms_.find(monomial);
  return it == terms_.end() ? 0.0 : it->second;
}

Form Form::one_one(int n, std::span<const double> a) {
  if (a.size() != static_cast<std::size_t>(n * n)) {
    throw std::invalid_argument("Form::one_one: need an n x n matrix");
  }
  Form f(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // dz_i ^ dzbar_j in sorted order: dz_i has the lower bit.
      f.add(dz(i) | dzbar(n, j), a[static_cast<std::size_t>(i * n + j)] *
                                         merge_sign(dz(i), dzbar(n, j)));
    }
  }
  return f;
}

Form Form::diagonal(std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  std::vector<double> a(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i * n + i)] = lambda[static_cast<std::size_t>(i)];
  }
  return one_one(n, a);
}

Form Form::identity(int n) {
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  return diagonal(ones);
}

Form Form::unit(int n) {
  Form f(n);
  f.add(0, 1.0);
  return f;
}

Form Form::wedge(const Form& other) const {
  if (other.n_ != n_) throw std::invalid_argument("Form::wedge: dimension mismatch");
  Form out(n_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) {
      if ((a & b) != 0) continue;
      out.add(a | b, merge_sign(a, b) * ca * cb);
    }
  }
  return out;
}

Form Form::power(int p) const {
  Form out = unit(n_);
  for (int i = 0; i < p; ++i) out = out.wedge(*this);
  return out;
}

double wedge_top_coeff(int m, std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1 || n > 4) throw std::invalid_argument("wedge_top_coeff: need 1 <= n <= 4");
  if (m < 0 || m > n) throw std::invalid_argument("wedge_top_coeff: m out of range");
  const Form top = Form::diagonal(lambda).power(m).wedge(Form::identity(n).power(n - m));
  const std::uint32_t all = (1u << (2 * n)) - 1;
  return top.coeff(all) / reference_sign(n, (1u << n) - 1);
}

double mixed_top_coeff(int n, const std::vector<std::vector<double>>& factors) {
  if (n < 1 || n > 4) throw std::invalid_argument("mixed_top_coeff: need 1 <= n <= 4");
  if (factors.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("mixed_top_coeff: need n factors");
  }
  Form acc = Form::unit(n);
  for (const auto& a : factors) acc = acc.wedge(Form::one_one(n, a));
  const std::uint32_t all = (1u << (2 * n)) - 1;
  return acc.coeff(all) / reference_sign(n, (1u << n) - 1);
}

std::vector<double> cone_form_coefficients(std::span<const double> lambda, double c, int k,
                                           std::span<const double> weights) {
  const int n = static_cast<int>(lambda.size());
  if (n < 2 || n > 4) throw std::invalid_argument("cone_form_coefficients: need 2 <= n <= 4");
  const Form chi = Form::diagonal(lambda);
  const Form omega = Form::identity(n);
  const auto piece = [&](int m) { return chi.power(m - 1).wedge(omega.power(n - m)); };

  Form total(n);
  const Form dominant = piece(k);
  for (const auto& [mono, coeff] : dominant.terms()) total.add(mono, c * k * coeff);
  for (int m = 1; m < static_cast<int>(weights.size()); ++m) {
    const double b = weights[static_cast<std::size_t>(m)];
    if (b == 0.0) continue;
    const Form opposing = piece(m);
    for (const auto& [mono, coeff] : opposing.terms()) total.add(mono, -b * m * coeff);
  }

  std::vector<double> out(static_cast<std::size_t>(n));
  const std::uint32_t all_indices = (1u << n) - 1;
  for (int i = 0; i < n; ++i) {
    const std::uint32_t rest = all_indices & ~(1u << i);
    std::uint32_t mask = 0;
    for (int j = 0; j < n; ++j) {
      if (rest >> j & 1u) mask |= dz(j) | dzbar(n, j);
    }
    out[static_cast<std::size_t>(i)] = total.coeff(mask) / reference_sign(n, rest);
  }
  return out;
}

bool form_positivity_n1(std::span<const double> lambda, double c, int k, int l) {
  std::vector<double> weights(static_cast<std::size_t>(k), 0.0);
  weights[static_cast<std::size_t>(l)] = 1.0;
  for (double coeff : cone_form_coefficients(lambda, c, k, weights)) {
    if (!(coeff > 0.0)) return false;
  }
  return true;
}

std::vector<double> fd_functional_derivative(const jflow::geometry::ScalarField& u,
                                             const jflow::geometry::ScalarField& w,
                                             const jflow::geometry::BaseForm& base, int m,
                                             std::span<const double> eps) {
  std::vector<double> out;
  for (double e : eps) {
    jflow::geometry::ScalarField plus(u.grid());
    jflow::geometry::ScalarField minus(u.grid());
    for (std::size_t p = 0; p < u.size(); ++p) {
      plus[p] = u[p] + e * w[p];
      minus[p] = u[p] - e * w[p];
    }
    out.push_back((jflow::functionals::J_m(plus, base, m) -
                   jflow::functionals::J_m(minus, base, m)) /
                  (2.0 * e));
  }
  return out;
}

std::vector<double> observed_orders(std::span<const double> errors) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    out.push_back(std::log2(errors[i] / errors[i + 1]));
  }
  return out;
}

}  // namespace oracle
