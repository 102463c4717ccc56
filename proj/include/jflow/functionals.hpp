#pragma once

// Normalization constant, J_m energies and their time derivatives.
//
// All integrals are against the wedge densities
//   W_m(x) = m!(n-m)! sigma_m(lambda(x)),
// i.e. chi^m ^ omega^(n-m) relative to the volume element, integrated with
// geometry::integrate.

#include <vector>

#include "jflow/geometry.hpp"
#include "jflow/symfunc.hpp"

namespace jflow::functionals {

using geometry::BaseForm;
using geometry::ScalarField;
using geometry::SpectrumField;
using symfunc::FlowIndices;

/// W_m at every point of a spectrum field.
std::vector<double> wedge_density(const SpectrumField& spectra, int m);

/// sum_m b_m W_m, the numerator density of the flow quotient.
std::vector<double> numerator_density(const SpectrumField& spectra, const FlowIndices& idx);

/// c = int sum_m b_m chi^m ^ w^(n-m) / int chi^k ^ w^(n-k) for the base form.
/// Throws ConfigError if the denominator integral is not positive.
double normalization_c(const BaseForm& base, const FlowIndices& idx);

/// Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int count);

/// Node count used for J_m: ceil((m+1)/2) + 1.
int path_nodes(int m);

struct PathIntegral {
  double value = 0.0;
  /// False if chi_{s u} left Gamma_k at some quadrature node and point.
  bool path_in_cone = true;
};

/// J_m(u) = int_0^1 int_M u chi_{s u}^m ^ w^(n-m) ds along v(s) = s u.
/// `extra_nodes` raises the quadrature order (used to check exactness).
PathIntegral J_m_path(const ScalarField& u, const BaseForm& base, int m, int extra_nodes = 0);
double J_m(const ScalarField& u, const BaseForm& base, int m);

/// Polarized form of J_k along the straight path:
///   1/(k+1) sum_{i=0..k} int u chi_u^i ^ chi^(k-i) ^ w^(n-k).
/// Mixed wedge coefficients come from the determinant polynomial
/// det(x chi_u + y chi + I), not from eigenvalues.
double J_k_polarization(const ScalarField& u, const BaseForm& base, int k);

/// Mixed coefficients of chi_a^i ^ chi_b^(k-i) ^ w^(n-k) (i = 0..k) for one
/// pair of symmetric matrices.
std::vector<double> mixed_wedge_coefficients(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                             int k);

/// int u_t chi_u^m ^ w^(n-m).
double dJ_m_dt(const ScalarField& u, const ScalarField& u_t, const BaseForm& base, int m);

/// Same, reusing an already computed spectrum field of chi_u.
double dJ_m_dt(const SpectrumField& chi_u_spectra, const ScalarField& u_t, int m);

struct FunctionalReport {
  double t = 0.0;
  std::vector<double> J;  // J_0 .. J_k
  double c = 0.0;
  double dJk_dt = 0.0;
  /// d/dt sum_m b_m J_m; equals dJ_l/dt in single-quotient mode.
  double dJl_dt = 0.0;
};

FunctionalReport functional_report(double t, const ScalarField& u, const ScalarField& u_t,
                                   const BaseForm& base, const FlowIndices& idx, double c);

}  // namespace jflow::functionals
