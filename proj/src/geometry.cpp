#include "jflow/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "jflow/errors.hpp"
#include "jflow/parallel.hpp"
#include "jflow/simd/kernels.hpp"
#include "jflow/symfunc.hpp"

namespace jflow::geometry {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Calls op(minus, center, plus, out, len) over contiguous runs so that every
// point gets its periodic neighbours along `axis`.
template <class Op>
void along_axis(const TorusGrid& g, int axis, const double* in, double* out, const Op& op) {
  const std::size_t S = g.stride(axis);
  const auto N = static_cast<std::size_t>(g.points_per_dim());
  const std::size_t block = N * S;
  const std::size_t outer = g.size() / block;
  if (S == 1) {
    parallel::parallel_for(
        outer,
        [&](std::size_t begin, std::size_t end) {
          for (std::size_t o = begin; o < end; ++o) {
            const double* row = in + o * N;
            double* dst = out + o * N;
            op(row + N - 1, row, row + 1, dst, 1);
            op(row, row + 1, row + 2, dst + 1, N - 2);
            op(row + N - 2, row + N - 1, row, dst + N - 1, 1);
          }
        },
        N);
    return;
  }
  parallel::parallel_for(
      outer * N,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
          const std::size_t base = (r / N) * block;
          const std::size_t c = r % N;
          op(in + base + ((c + N - 1) % N) * S, in + base + c * S, in + base + ((c + 1) % N) * S,
             out + base + c * S, S);
        }
      },
      S);
}

void second_difference_along(const TorusGrid& g, int axis, const double* in, double* out,
                             double scale) {
  const auto& k = simd::active();
  along_axis(g, axis, in, out,
             [&](const double* m, const double* c, const double* p, double* o, std::size_t len) {
               k.second_difference(m, c, p, o, len, scale);
             });
}

void first_difference_along(const TorusGrid& g, int axis, const double* in, double* out,
                            double scale) {
  const auto& k = simd::active();
  along_axis(g, axis, in, out,
             [&](const double* m, const double*, const double* p, double* o, std::size_t len) {
               k.first_difference(m, p, o, len, scale);
             });
}

void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// TorusGrid

TorusGrid::TorusGrid(int n, int points_per_dim) : n_(n), N_(points_per_dim) {
  if (n < 2 || n > symfunc::kMaxDim) {
    throw std::invalid_argument("torus dimension must lie in [2, " +
                                std::to_string(symfunc::kMaxDim) + "]");
  }
  if (points_per_dim < 8) throw std::invalid_argument("need at least 8 points per dimension");
  h_ = kTwoPi / points_per_dim;
  strides_.assign(static_cast<std::size_t>(n), 1);
  for (int a = n - 2; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] =
        strides_[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(points_per_dim);
  }
  size_ = strides_[0] * static_cast<std::size_t>(points_per_dim);
}

std::vector<double> TorusGrid::coordinates(std::size_t point) const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) x[static_cast<std::size_t>(a)] = coordinate_index(point, a) * h_;
  return x;
}

std::vector<int> TorusGrid::multi_index(std::size_t point) const {
  std::vector<int> idx(static_cast<std::size_t>(n_));
  for (int a = 0; a < n_; ++a) idx[static_cast<std::size_t>(a)] = coordinate_index(point, a);
  return idx;
}

double TorusGrid::volume() const noexcept { return std::pow(kTwoPi, n_); }

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(TorusGrid grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("scalar field: expected " + std::to_string(grid_.size()) +
                                " values, got " + std::to_string(values_.size()));
  }
}

ScalarField ScalarField::from_function(const TorusGrid& grid,
                                       const std::function<double(std::span<const double>)>& f) {
  ScalarField out(grid);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto x = grid.coordinates(p);
    out.values_[p] = f(x);
  }
  return out;
}

double ScalarField::mean() const {
  return parallel::sum(values_) / static_cast<double>(values_.size());
}

double ScalarField::min() const {
  double lo = 0.0;
  double hi = 0.0;
  simd::active().minmax(values_.data(), values_.size(), &lo, &hi);
  return lo;
}

double ScalarField::max() const {
  double lo = 0.0;
  double hi = 0.0;
  simd::active().minmax(values_.data(), values_.size(), &lo, &hi);
  return hi;
}

// ---------------------------------------------------------------------------
// Point fields

HermitianPointField::HermitianPointField(TorusGrid grid) : grid_(grid) {
  const auto n = static_cast<std::size_t>(grid.dim());
  entries_.assign(n * (n + 1) / 2, std::vector<double>(grid.size(), 0.0));
}

std::size_t HermitianPointField::slot(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int n = grid_.dim();
  if (i < 0 || j >= n) throw std::out_of_range("matrix entry out of range");
  // Row-major upper triangle.
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}

std::span<const double> HermitianPointField::entry(int i, int j) const {
  return entries_[slot(i, j)];
}

std::span<double> HermitianPointField::entry(int i, int j) { return entries_[slot(i, j)]; }

Eigen::MatrixXd HermitianPointField::at(std::size_t point) const {
  const int n = grid_.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = entry(i, j)[point];
  }
  return m;
}

SpectrumField::SpectrumField(TorusGrid grid)
    : grid_(grid),
      ranks_(static_cast<std::size_t>(grid.dim()), std::vector<double>(grid.size(), 0.0)) {}

void SpectrumField::point(std::size_t p, std::span<double> out) const {
  for (std::size_t r = 0; r < ranks_.size(); ++r) out[r] = ranks_[r][p];
}

std::vector<double> SpectrumField::point(std::size_t p) const {
  std::vector<double> out(ranks_.size());
  point(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// BaseForm

BaseForm::BaseForm(TorusGrid grid, Eigen::MatrixXd constant_part,
                   std::optional<ScalarField> potential, int k)
    : constant_(std::move(constant_part)),
      potential_(std::move(potential)),
      k_(k),
      field_(grid) {
  const int n = grid.dim();
  if (constant_.rows() != n || constant_.cols() != n) {
    throw std::invalid_argument("base form: constant part must be " + std::to_string(n) + "x" +
                                std::to_string(n));
  }
  if (!constant_.allFinite()) throw std::invalid_argument("base form: non-finite entries");
  const double asym = (constant_ - constant_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14 * std::max(1.0, constant_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("base form: constant part must be symmetric");
  }
  if (k < 1 || k > n) throw std::invalid_argument("base form: cone degree out of range");

  std::optional<HermitianPointField> hess;
  if (potential_) {
    require_same_grid(potential_->grid(), grid, "base form potential");
    hess = complex_hessian(*potential_);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto dst = field_.entry(i, j);
      const double c = 0.5 * (constant_(i, j) + constant_(j, i));
      if (hess) {
        const auto src = hess->entry(i, j);
        for (std::size_t p = 0; p < dst.size(); ++p) dst[p] = c + src[p];
      } else {
        std::fill(dst.begin(), dst.end(), c);
      }
    }
  }

  const SpectrumField spectra = spectrum_field(field_);
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    spectra.point(p, lambda);
    if (!symfunc::in_gamma_k(lambda, k)) {
      throw ConeViolation("base form leaves Gamma_" + std::to_string(k) + " at grid point " +
                              std::to_string(p),
                          lambda, p);
    }
  }
}

// ---------------------------------------------------------------------------
// Derived fields

HermitianPointField complex_hessian(const ScalarField& u) {
  const TorusGrid& g = u.grid();
  const int n = g.dim();
  const double h = g.spacing();
  HermitianPointField out(g);
  std::vector<double> tmp(g.size());
  for (int i = 0; i < n; ++i) {
    second_difference_along(g, i, u.values().data(), out.entry(i, i).data(), 0.25 / (h * h));
    for (int j = i + 1; j < n; ++j) {
      // delta_i delta_j with centred first differences is the 4-point cross stencil.
      first_difference_along(g, j, u.values().data(), tmp.data(), 1.0 / (2.0 * h));
      first_difference_along(g, i, tmp.data(), out.entry(i, j).data(), 0.25 / (2.0 * h));
    }
  }
  return out;
}

HermitianPointField chi_scaled(const BaseForm& base, const ScalarField& u, double scale) {
  require_same_grid(base.grid(), u.grid(), "chi_u");
  const HermitianPointField hess = complex_hessian(u);
  HermitianPointField out(u.grid());
  const auto& k = simd::active();
  const int n = u.grid().dim();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const auto b = base.field().entry(i, j);
      const auto d = hess.entry(i, j);
      k.axpy(b.data(), scale, d.data(), out.entry(i, j).data(), b.size());
    }
  }
  return out;
}

HermitianPointField chi_u(const BaseForm& base, const ScalarField& u) {
  return chi_scaled(base, u, 1.0);
}

SpectrumField spectrum_field(const HermitianPointField& field) {
  const TorusGrid& g = field.grid();
  const int n = g.dim();
  SpectrumField out(g);
  if (n == 2) {
    const auto a = field.entry(0, 0);
    const auto b = field.entry(0, 1);
    const auto d = field.entry(1, 1);
    auto lo = out.rank(0);
    auto hi = out.rank(1);
    const auto& k = simd::active();
    parallel::parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
      k.sym2_eigenvalues(a.data() + begin, b.data() + begin, d.data() + begin, lo.data() + begin,
                         hi.data() + begin, end - begin);
    });
    return out;
  }

  using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, symfunc::kMaxDim,
                              symfunc::kMaxDim>;
  parallel::parallel_for(
      g.size(),
      [&](std::size_t begin, std::size_t end) {
        Small m(n, n);
        Eigen::SelfAdjointEigenSolver<Small> solver(n);
        for (std::size_t p = begin; p < end; ++p) {
          for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) m(i, j) = m(j, i) = field.entry(i, j)[p];
          }
          solver.compute(m, Eigen::EigenvaluesOnly);
          if (solver.info() != Eigen::Success) {
            std::string where;
            for (int x : g.multi_index(p)) where += (where.empty() ? "" : ",") + std::to_string(x);
            throw NumericalError("symmetric eigensolver did not converge at grid point (" + where +
                                 ")");
          }
          for (int r = 0; r < n; ++r) out.rank(r)[p] = solver.eigenvalues()(r);
        }
      },
      static_cast<std::size_t>(n * n));
  return out;
}

// ---------------------------------------------------------------------------
// Integration

double integrate(const TorusGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw std::invalid_argument("integrate: size mismatch");
  return parallel::sum(values) / static_cast<double>(values.size()) * grid.volume();
}

double integrate(const ScalarField& f) { return integrate(f.grid(), f.values()); }

double integrate_product(const ScalarField& f, std::span<const double> g) {
  if (g.size() != f.size()) throw std::invalid_argument("integrate_product: size mismatch");
  return parallel::dot(f.values(), g) / static_cast<double>(f.size()) * f.grid().volume();
}

ScalarField shift(const ScalarField& f, int axis, int steps) {
  const TorusGrid& g = f.grid();
  const int N = g.points_per_dim();
  const int s = ((steps % N) + N) % N;
  ScalarField out(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const int c = g.coordinate_index(p, axis);
    const int src = (c + s) % N;
    const std::size_t q = p + static_cast<std::size_t>(src - c) * g.stride(axis);
    out[p] = f[q];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

constexpr std::string_view kSnapshotMagic = "jflow-snapshot 1";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("snapshot line " + std::to_string(line) + ": bad number '" + s +
                             "'");
  }
  return v;
}

std::string expect_key(std::istream& in, const std::string& key, std::size_t& line) {
  std::string text;
  if (!std::getline(in, text)) {
    throw std::runtime_error("snapshot: missing '" + key + "' header");
  }
  ++line;
  if (text.rfind(key + " ", 0) != 0) {
    throw std::runtime_error("snapshot line " + std::to_string(line) + ": expected '" + key +
                             " <value>'");
  }
  return text.substr(key.size() + 1);
}

}  // namespace

void write_snapshot(std::ostream& out, const ScalarField& field, const std::string& name,
                    double time) {
  if (name.empty() || name.find_first_of(" \n") != std::string::npos) {
    throw std::invalid_argument("snapshot field name must be a single token");
  }
  out << kSnapshotMagic << '\n'
      << "n " << field.grid().dim() << '\n'
      << "N " << field.grid().points_per_dim() << '\n'
      << "field " << name << '\n'
      << "t " << format_double(time) << '\n';
  for (double v : field.values()) out << format_double(v) << '\n';
}

Snapshot read_snapshot(std::istream& in) {
  std::size_t line = 0;
  std::string text;
  if (!std::getline(in, text) || text != kSnapshotMagic) {
    throw std::runtime_error("snapshot: missing '" + std::string(kSnapshotMagic) + "' header");
  }
  ++line;
  const int n = std::stoi(expect_key(in, "n", line));
  const int N = std::stoi(expect_key(in, "N", line));
  std::string name = expect_key(in, "field", line);
  const double t = parse_double(expect_key(in, "t", line), line);
  TorusGrid grid(n, N);
  std::vector<double> values;
  values.reserve(grid.size());
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    values.push_back(parse_double(text, line));
  }
  if (values.size() != grid.size()) {
    throw std::runtime_error("snapshot: expected " + std::to_string(grid.size()) +
                             " values, found " + std::to_string(values.size()));
  }
  return Snapshot{ScalarField(grid, std::move(values)), std::move(name), t};
}

}  // namespace jflow::geometry
