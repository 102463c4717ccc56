#include "jflow/functionals.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "jflow/errors.hpp"
#include "jflow/parallel.hpp"

namespace jflow::functionals {
namespace {

constexpr int kMaxDim = symfunc::kMaxDim;

void for_each_point(const SpectrumField& spectra,
                    const std::function<void(std::size_t, std::span<const double>)>& fn) {
  const int n = spectra.dim();
  parallel::parallel_for(
      spectra.grid().size(),
      [&](std::size_t begin, std::size_t end) {
        std::array<double, kMaxDim> lambda{};
        const auto view = std::span(lambda).first(static_cast<std::size_t>(n));
        for (std::size_t p = begin; p < end; ++p) {
          spectra.point(p, view);
          fn(p, view);
        }
      },
      static_cast<std::size_t>(n));
}

}  // namespace

std::vector<double> wedge_density(const SpectrumField& spectra, int m) {
  const int n = spectra.dim();
  const double weight = symfunc::wedge_weight(n, m);
  std::vector<double> out(spectra.grid().size());
  for_each_point(spectra, [&](std::size_t p, std::span<const double> lambda) {
    out[p] = weight * symfunc::sigma(m, lambda);
  });
  return out;
}

std::vector<double> numerator_density(const SpectrumField& spectra, const FlowIndices& idx) {
  const int n = spectra.dim();
  if (n != idx.n()) throw std::invalid_argument("numerator_density: dimension mismatch");
  const auto b = idx.weights();
  std::vector<double> out(spectra.grid().size());
  for_each_point(spectra, [&](std::size_t p, std::span<const double> lambda) {
    std::array<double, kMaxDim + 1> e{};
    symfunc::elementary(lambda, idx.k(), e);
    double acc = 0.0;
    for (int m = 0; m < idx.k(); ++m) {
      if (b[m] != 0.0) acc += b[m] * symfunc::wedge_weight(n, m) * e[m];
    }
    out[p] = acc;
  });
  return out;
}

double normalization_c(const BaseForm& base, const FlowIndices& idx) {
  const auto& grid = base.grid();
  if (grid.dim() != idx.n()) throw ConfigError("normalization_c: dimension mismatch");
  const SpectrumField spectra = geometry::spectrum_field(base.field());
  const double numer = geometry::integrate(grid, numerator_density(spectra, idx));
  const double denom = geometry::integrate(grid, wedge_density(spectra, idx.k()));
  if (!(denom > 0.0)) {
    throw ConfigError("normalization_c: integral of chi^k ^ omega^(n-k) is " +
                      std::to_string(denom) + ", must be positive");
  }
  return numer / denom;
}

QuadratureRule gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  // P_count(x) and its derivative by the three-term recurrence.
  const auto legendre = [count](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= count; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, count * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(count));
  rule.weights.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(count - 1 - i);
    rule.nodes[lo] = 0.5 * (1.0 - x);
    rule.nodes[hi] = 0.5 * (1.0 + x);
    rule.weights[lo] = 0.5 * w;
    rule.weights[hi] = 0.5 * w;
  }
  return rule;
}

int path_nodes(int m) { return (m + 2) / 2 + 1; }

PathIntegral J_m_path(const ScalarField& u, const BaseForm& base, int m, int extra_nodes) {
  const int n = base.grid().dim();
  if (m < 0 || m > n) throw std::invalid_argument("J_m: degree out of range");
  if (extra_nodes < 0) throw std::invalid_argument("J_m: extra_nodes must be >= 0");
  const QuadratureRule rule = gauss_legendre(path_nodes(m) + extra_nodes);
  PathIntegral out;
  const int k = base.cone_degree();
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto chi = geometry::chi_scaled(base, u, rule.nodes[q]);
    const SpectrumField spectra = geometry::spectrum_field(chi);
    const auto density = wedge_density(spectra, m);
    out.value += rule.weights[q] * geometry::integrate_product(u, density);
    if (out.path_in_cone) {
      std::vector<double> lambda(static_cast<std::size_t>(n));
      for (std::size_t p = 0; p < spectra.grid().size(); ++p) {
        spectra.point(p, lambda);
        if (!symfunc::in_gamma_k(lambda, k)) {
          out.path_in_cone = false;
          break;
        }
      }
    }
  }
  return out;
}

double J_m(const ScalarField& u, const BaseForm& base, int m) {
  return J_m_path(u, base, m).value;
}

std::vector<double> mixed_wedge_coefficients(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                             int k) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) {
    throw std::invalid_argument("mixed_wedge_coefficients: shape mismatch");
  }
  if (k < 0 || k > n) throw std::invalid_argument("mixed_wedge_coefficients: bad degree");
  // det(x A + y B + I) has total degree <= n; sampling x and y on the
  // (n+1)-th roots of unity recovers every coefficient without aliasing.
  using Complex = std::complex<double>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
  const int r = static_cast<int>(n) + 1;
  std::vector<Complex> roots(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * j / r);

  std::vector<Complex> samples(static_cast<std::size_t>(r * r));
  CMatrix m(n, n);
  for (int p = 0; p < r; ++p) {
    for (int q = 0; q < r; ++q) {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          m(i, j) = roots[p] * a(i, j) + roots[q] * b(i, j) + (i == j ? 1.0 : 0.0);
        }
      }
      samples[static_cast<std::size_t>(p * r + q)] = m.determinant();
    }
  }

  std::vector<double> coeffs(static_cast<std::size_t>(k + 1));
  const auto factorial = [](Eigen::Index x) {
    double f = 1.0;
    for (Eigen::Index i = 2; i <= x; ++i) f *= static_cast<double>(i);
    return f;
  };
  const double tail = factorial(n - k);
  for (int i = 0; i <= k; ++i) {
    const int j = k - i;
    Complex acc = 0.0;
    for (int p = 0; p < r; ++p) {
      for (int q = 0; q < r; ++q) {
        acc += samples[static_cast<std::size_t>(p * r + q)] * std::conj(roots[(i * p) % r]) *
               std::conj(roots[(j * q) % r]);
      }
    }
    const double poly_coeff = acc.real() / (r * r);
    coeffs[static_cast<std::size_t>(i)] =
        factorial(i) * factorial(j) * tail * poly_coeff;
  }
  return coeffs;
}

double J_k_polarization(const ScalarField& u, const BaseForm& base, int k) {
  const auto& grid = base.grid();
  if (!(u.grid() == grid)) throw std::invalid_argument("J_k_polarization: grid mismatch");
  const auto chi_u = geometry::chi_u(base, u);
  std::vector<double> density(grid.size());
  parallel::parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto coeffs = mixed_wedge_coefficients(chi_u.at(p), base.field().at(p), k);
      double acc = 0.0;
      for (double c : coeffs) acc += c;
      density[p] = acc / (k + 1);
    }
  });
  return geometry::integrate_product(u, density);
}

double dJ_m_dt(const SpectrumField& chi_u_spectra, const ScalarField& u_t, int m) {
  return geometry::integrate_product(u_t, wedge_density(chi_u_spectra, m));
}

double dJ_m_dt(const ScalarField& u, const ScalarField& u_t, const BaseForm& base, int m) {
  if (!(u.grid() == u_t.grid())) throw std::invalid_argument("dJ_m_dt: grid mismatch");
  return dJ_m_dt(geometry::spectrum_field(geometry::chi_u(base, u)), u_t, m);
}

FunctionalReport functional_report(double t, const ScalarField& u, const ScalarField& u_t,
                                   const BaseForm& base, const FlowIndices& idx, double c) {
  FunctionalReport r;
  r.t = t;
  r.c = c;
  r.J.reserve(static_cast<std::size_t>(idx.k() + 1));
  for (int m = 0; m <= idx.k(); ++m) r.J.push_back(J_m(u, base, m));
  const SpectrumField spectra = geometry::spectrum_field(geometry::chi_u(base, u));
  r.dJk_dt = dJ_m_dt(spectra, u_t, idx.k());
  r.dJl_dt = geometry::integrate_product(u_t, numerator_density(spectra, idx));
  return r;
}

}  // namespace jflow::functionals
