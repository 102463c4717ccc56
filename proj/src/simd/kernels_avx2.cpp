// Compiled with -mavx2 only; callers reach it through the dispatch table after
// a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "jflow/simd/kernels.hpp"
#include "striped_sum.hpp"

namespace jflow::simd {
namespace {

constexpr std::size_t kWidth = 4;

void second_difference(const double* minus, const double* center, const double* plus,
                       double* out, std::size_t len, double scale) {
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(plus + i), _mm256_loadu_pd(minus + i));
    const __m256d diff = _mm256_sub_pd(sum, _mm256_mul_pd(two, _mm256_loadu_pd(center + i)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vscale, diff));
  }
  for (; i < len; ++i) out[i] = scale * ((plus[i] + minus[i]) - 2.0 * center[i]);
}

void first_difference(const double* minus, const double* plus, double* out, std::size_t len,
                      double scale) {
  const __m256d vscale = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(plus + i), _mm256_loadu_pd(minus + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vscale, diff));
  }
  for (; i < len; ++i) out[i] = scale * (plus[i] - minus[i]);
}

void axpy(const double* x, double a, const double* y, double* out, std::size_t len) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), prod));
  }
  for (; i < len; ++i) out[i] = x[i] + a * y[i];
}

void accumulate(double* out, double a, const double* x, std::size_t len) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), prod));
  }
  for (; i < len; ++i) out[i] = out[i] + a * x[i];
}

void sym2_eigenvalues(const double* a, const double* b, const double* d, double* lo,
                      double* hi, std::size_t len) {
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d vd = _mm256_loadu_pd(d + i);
    const __m256d mean = _mm256_mul_pd(half, _mm256_add_pd(va, vd));
    const __m256d gap = _mm256_mul_pd(half, _mm256_sub_pd(va, vd));
    const __m256d radius =
        _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(gap, gap), _mm256_mul_pd(vb, vb)));
    _mm256_storeu_pd(lo + i, _mm256_sub_pd(mean, radius));
    _mm256_storeu_pd(hi + i, _mm256_add_pd(mean, radius));
  }
  for (; i < len; ++i) {
    const double mean = 0.5 * (a[i] + d[i]);
    const double half_gap = 0.5 * (a[i] - d[i]);
    const double radius = std::sqrt(half_gap * half_gap + b[i] * b[i]);
    lo[i] = mean - radius;
    hi[i] = mean + radius;
  }
}

struct VectorLanes {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d mask =
        _mm256_cmp_pd(_mm256_andnot_pd(sign, s), _mm256_andnot_pd(sign, x), _CMP_GE_OQ);
    const __m256d big = _mm256_blendv_pd(x, s, mask);
    const __m256d small = _mm256_blendv_pd(s, x, mask);
    c = _mm256_add_pd(c, _mm256_add_pd(_mm256_sub_pd(big, t), small));
    s = t;
  }

  detail::Lanes spill() const {
    alignas(32) double ss[kWidth];
    alignas(32) double cc[kWidth];
    _mm256_store_pd(ss, s);
    _mm256_store_pd(cc, c);
    detail::Lanes lanes{};
    for (std::size_t j = 0; j < kWidth; ++j) lanes[j] = {ss[j], cc[j]};
    return lanes;
  }
};

static_assert(kReductionLanes == kWidth);

double sum(const double* x, std::size_t len) {
  VectorLanes acc;
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) acc.add(_mm256_loadu_pd(x + i));
  auto lanes = acc.spill();
  for (; i < len; ++i) lanes[i % kWidth].add(x[i]);
  return detail::finish(lanes);
}

double dot(const double* x, const double* y, std::size_t len) {
  VectorLanes acc;
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  auto lanes = acc.spill();
  for (; i < len; ++i) lanes[i % kWidth].add(x[i] * y[i]);
  return detail::finish(lanes);
}

void minmax(const double* x, std::size_t len, double* lo, double* hi) {
  double mn = x[0];
  double mx = x[0];
  std::size_t i = 0;
  if (len >= kWidth) {
    __m256d vmin = _mm256_loadu_pd(x);
    __m256d vmax = vmin;
    for (i = kWidth; i + kWidth <= len; i += kWidth) {
      const __m256d v = _mm256_loadu_pd(x + i);
      vmin = _mm256_min_pd(vmin, v);
      vmax = _mm256_max_pd(vmax, v);
    }
    alignas(32) double a[kWidth];
    alignas(32) double b[kWidth];
    _mm256_store_pd(a, vmin);
    _mm256_store_pd(b, vmax);
    mn = *std::min_element(a, a + kWidth);
    mx = *std::max_element(b, b + kWidth);
  }
  for (; i < len; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::Avx2,       &second_difference, &first_difference,
                                 &axpy,           &accumulate,        &sym2_eigenvalues,
                                 &sum,            &dot,               &minmax};
  return table;
}

}  // namespace jflow::simd
