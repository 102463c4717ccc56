#include <algorithm>
#include <cmath>

#include "jflow/simd/kernels.hpp"
#include "striped_sum.hpp"

namespace jflow::simd {
namespace {

void second_difference(const double* minus, const double* center, const double* plus,
                       double* out, std::size_t len, double scale) {
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = scale * ((plus[i] + minus[i]) - 2.0 * center[i]);
  }
}

void first_difference(const double* minus, const double* plus, double* out, std::size_t len,
                      double scale) {
  for (std::size_t i = 0; i < len; ++i) out[i] = scale * (plus[i] - minus[i]);
}

void axpy(const double* x, double a, const double* y, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = x[i] + a * y[i];
}

void accumulate(double* out, double a, const double* x, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = out[i] + a * x[i];
}

void sym2_eigenvalues(const double* a, const double* b, const double* d, double* lo,
                      double* hi, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    const double mean = 0.5 * (a[i] + d[i]);
    const double half_gap = 0.5 * (a[i] - d[i]);
    const double radius = std::sqrt(half_gap * half_gap + b[i] * b[i]);
    lo[i] = mean - radius;
    hi[i] = mean + radius;
  }
}

double sum(const double* x, std::size_t len) {
  detail::Lanes lanes{};
  for (std::size_t i = 0; i < len; ++i) lanes[i % kReductionLanes].add(x[i]);
  return detail::finish(lanes);
}

double dot(const double* x, const double* y, std::size_t len) {
  detail::Lanes lanes{};
  for (std::size_t i = 0; i < len; ++i) lanes[i % kReductionLanes].add(x[i] * y[i]);
  return detail::finish(lanes);
}

void minmax(const double* x, std::size_t len, double* lo, double* hi) {
  double mn = x[0];
  double mx = x[0];
  for (std::size_t i = 1; i < len; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar,     &second_difference, &first_difference,
                                 &axpy,           &accumulate,        &sym2_eigenvalues,
                                 &sum,            &dot,               &minmax};
  return table;
}

}  // namespace jflow::simd
