#pragma once

// Flat complex torus with translational symmetry in the imaginary directions.
// Potentials depend only on the n real coordinates x_1..x_n in [0, 2 pi), so
// the complex Hessian u_{i jbar} is one quarter of the real Hessian and the
// computational domain is an n-dimensional periodic grid. omega is the
// Euclidean Kahler form (identity in the grid frame).

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jflow::geometry {

class TorusGrid {
 public:
  /// n >= 2 complex dimension, N >= 8 points per real axis.
  TorusGrid(int n, int points_per_dim);

  int dim() const noexcept { return n_; }
  int points_per_dim() const noexcept { return N_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return size_; }
  /// Row-major stride of an axis (last axis contiguous).
  std::size_t stride(int axis) const noexcept { return strides_[static_cast<std::size_t>(axis)]; }

  /// Index of a point along one axis.
  int coordinate_index(std::size_t point, int axis) const noexcept {
    return static_cast<int>((point / stride(axis)) % static_cast<std::size_t>(N_));
  }
  /// Real coordinates of a point.
  std::vector<double> coordinates(std::size_t point) const;
  std::vector<int> multi_index(std::size_t point) const;

  /// (2 pi)^n, the measure of the reduced torus.
  double volume() const noexcept;

  bool operator==(const TorusGrid& other) const noexcept {
    return n_ == other.n_ && N_ == other.N_;
  }

 private:
  int n_;
  int N_;
  double h_;
  std::size_t size_;
  std::vector<std::size_t> strides_;
};

class ScalarField {
 public:
  explicit ScalarField(TorusGrid grid, double fill = 0.0);
  ScalarField(TorusGrid grid, std::vector<double> values);

  static ScalarField from_function(const TorusGrid& grid,
                                   const std::function<double(std::span<const double>)>& f);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t p) const { return values_[p]; }
  double& operator[](std::size_t p) { return values_[p]; }
  std::size_t size() const noexcept { return values_.size(); }

  double mean() const;
  double min() const;
  double max() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// One real symmetric n x n matrix per grid point, stored as one array per
/// upper-triangular entry.
class HermitianPointField {
 public:
  explicit HermitianPointField(TorusGrid grid);

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> entry(int i, int j) const;
  std::span<double> entry(int i, int j);
  Eigen::MatrixXd at(std::size_t point) const;

 private:
  std::size_t slot(int i, int j) const;

  TorusGrid grid_;
  std::vector<std::vector<double>> entries_;
};

/// Ascending eigenvalues per point, one array per eigenvalue rank.
class SpectrumField {
 public:
  explicit SpectrumField(TorusGrid grid);

  const TorusGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  std::span<const double> rank(int r) const { return ranks_[static_cast<std::size_t>(r)]; }
  std::span<double> rank(int r) { return ranks_[static_cast<std::size_t>(r)]; }
  /// Copies the spectrum of one point into out (size n).
  void point(std::size_t p, std::span<double> out) const;
  std::vector<double> point(std::size_t p) const;

 private:
  TorusGrid grid_;
  std::vector<std::vector<double>> ranks_;
};

/// Background closed form chi = H0 + sqrt(-1) d dbar rho, with its pointwise
/// matrix cached. Construction checks that every point lies in Gamma_k.
class BaseForm {
 public:
  BaseForm(TorusGrid grid, Eigen::MatrixXd constant_part, std::optional<ScalarField> potential,
           int k);

  const TorusGrid& grid() const noexcept { return field_.grid(); }
  const Eigen::MatrixXd& constant_part() const noexcept { return constant_; }
  const std::optional<ScalarField>& potential() const noexcept { return potential_; }
  int cone_degree() const noexcept { return k_; }
  /// H0 + (1/4) Hess(rho) at every point.
  const HermitianPointField& field() const noexcept { return field_; }

 private:
  Eigen::MatrixXd constant_;
  std::optional<ScalarField> potential_;
  int k_;
  HermitianPointField field_;
};

/// (1/4) of the central finite-difference Hessian; mixed entries use the
/// 4-point cross stencil.
HermitianPointField complex_hessian(const ScalarField& u);

/// chi_u = H0 + (1/4) Hess(rho) + (1/4) Hess(u).
HermitianPointField chi_u(const BaseForm& base, const ScalarField& u);

/// base + scale * (1/4) Hess(u); used for points along paths s -> chi_{s u}.
HermitianPointField chi_scaled(const BaseForm& base, const ScalarField& u, double scale);

/// Ascending eigenvalues at every point. Closed form for n = 2, symmetric
/// QR iteration for n >= 3. Throws NumericalError (with the point) if the
/// iteration fails.
SpectrumField spectrum_field(const HermitianPointField& field);

/// Trapezoidal integral over the reduced torus: mean * (2 pi)^n.
double integrate(const ScalarField& f);
double integrate(const TorusGrid& grid, std::span<const double> values);

/// Integral of f * g.
double integrate_product(const ScalarField& f, std::span<const double> g);

/// Cyclic shift of a field by `steps` grid points along `axis`.
ScalarField shift(const ScalarField& f, int axis, int steps);

/// Plain text snapshot: header lines then one value per line, printed in
/// shortest round-trip form.
struct Snapshot {
  ScalarField field;
  std::string name;
  double time;
};

void write_snapshot(std::ostream& out, const ScalarField& field, const std::string& name,
                    double time);
Snapshot read_snapshot(std::istream& in);

}  // namespace jflow::geometry
