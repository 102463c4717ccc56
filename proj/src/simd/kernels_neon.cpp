// AArch64 Advanced SIMD variant: two doubles per register.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "jflow/simd/kernels.hpp"
#include "striped_sum.hpp"

namespace jflow::simd {
namespace {

constexpr std::size_t kWidth = 2;

void second_difference(const double* minus, const double* center, const double* plus,
                       double* out, std::size_t len, double scale) {
  const float64x2_t vscale = vdupq_n_f64(scale);
  const float64x2_t two = vdupq_n_f64(2.0);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const float64x2_t sum = vaddq_f64(vld1q_f64(plus + i), vld1q_f64(minus + i));
    const float64x2_t diff = vsubq_f64(sum, vmulq_f64(two, vld1q_f64(center + i)));
    vst1q_f64(out + i, vmulq_f64(vscale, diff));
  }
  for (; i < len; ++i) out[i] = scale * ((plus[i] + minus[i]) - 2.0 * center[i]);
}

void first_difference(const double* minus, const double* plus, double* out, std::size_t len,
                      double scale) {
  const float64x2_t vscale = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    vst1q_f64(out + i, vmulq_f64(vscale, vsubq_f64(vld1q_f64(plus + i), vld1q_f64(minus + i))));
  }
  for (; i < len; ++i) out[i] = scale * (plus[i] - minus[i]);
}

void axpy(const double* x, double a, const double* y, double* out, std::size_t len) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(va, vld1q_f64(y + i))));
  }
  for (; i < len; ++i) out[i] = x[i] + a * y[i];
}

void accumulate(double* out, double a, const double* x, std::size_t len) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(out + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < len; ++i) out[i] = out[i] + a * x[i];
}

void sym2_eigenvalues(const double* a, const double* b, const double* d, double* lo,
                      double* hi, std::size_t len) {
  const float64x2_t half = vdupq_n_f64(0.5);
  std::size_t i = 0;
  for (; i + kWidth <= len; i += kWidth) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    const float64x2_t vd = vld1q_f64(d + i);
    const float64x2_t mean = vmulq_f64(half, vaddq_f64(va, vd));
    const float64x2_t gap = vmulq_f64(half, vsubq_f64(va, vd));
    const float64x2_t radius = vsqrtq_f64(vaddq_f64(vmulq_f64(gap, gap), vmulq_f64(vb, vb)));
    vst1q_f64(lo + i, vsubq_f64(mean, radius));
    vst1q_f64(hi + i, vaddq_f64(mean, radius));
  }
  for (; i < len; ++i) {
    const double mean = 0.5 * (a[i] + d[i]);
    const double half_gap = 0.5 * (a[i] - d[i]);
    const double radius = std::sqrt(half_gap * half_gap + b[i] * b[i]);
    lo[i] = mean - radius;
    hi[i] = mean + radius;
  }
}

// Two registers cover the four reduction lanes: lo holds lanes 0,1 and hi
// holds lanes 2,3.
struct PairLanes {
  float64x2_t s = vdupq_n_f64(0.0);
  float64x2_t c = vdupq_n_f64(0.0);

  void add(float64x2_t x) {
    const float64x2_t t = vaddq_f64(s, x);
    const uint64x2_t mask = vcgeq_f64(vabsq_f64(s), vabsq_f64(x));
    const float64x2_t big = vbslq_f64(mask, s, x);
    const float64x2_t small = vbslq_f64(mask, x, s);
    c = vaddq_f64(c, vaddq_f64(vsubq_f64(big, t), small));
    s = t;
  }
};

struct VectorLanes {
  PairLanes lo;
  PairLanes hi;

  detail::Lanes spill() const {
    detail::Lanes lanes{};
    lanes[0] = {vgetq_lane_f64(lo.s, 0), vgetq_lane_f64(lo.c, 0)};
    lanes[1] = {vgetq_lane_f64(lo.s, 1), vgetq_lane_f64(lo.c, 1)};
    lanes[2] = {vgetq_lane_f64(hi.s, 0), vgetq_lane_f64(hi.c, 0)};
    lanes[3] = {vgetq_lane_f64(hi.s, 1), vgetq_lane_f64(hi.c, 1)};
    return lanes;
  }
};

static_assert(kReductionLanes == 2 * kWidth);

double sum(const double* x, std::size_t len) {
  VectorLanes acc;
  std::size_t i = 0;
  for (; i + kReductionLanes <= len; i += kReductionLanes) {
    acc.lo.add(vld1q_f64(x + i));
    acc.hi.add(vld1q_f64(x + i + 2));
  }
  auto lanes = acc.spill();
  for (; i < len; ++i) lanes[i % kReductionLanes].add(x[i]);
  return detail::finish(lanes);
}

double dot(const double* x, const double* y, std::size_t len) {
  VectorLanes acc;
  std::size_t i = 0;
  for (; i + kReductionLanes <= len; i += kReductionLanes) {
    acc.lo.add(vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    acc.hi.add(vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  auto lanes = acc.spill();
  for (; i < len; ++i) lanes[i % kReductionLanes].add(x[i] * y[i]);
  return detail::finish(lanes);
}

void minmax(const double* x, std::size_t len, double* lo, double* hi) {
  double mn = x[0];
  double mx = x[0];
  std::size_t i = 0;
  if (len >= kWidth) {
    float64x2_t vmin = vld1q_f64(x);
    float64x2_t vmax = vmin;
    for (i = kWidth; i + kWidth <= len; i += kWidth) {
      const float64x2_t v = vld1q_f64(x + i);
      vmin = vminq_f64(vmin, v);
      vmax = vmaxq_f64(vmax, v);
    }
    mn = vminvq_f64(vmin);
    mx = vmaxvq_f64(vmax);
  }
  for (; i < len; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Isa::Neon,       &second_difference, &first_difference,
                                 &axpy,           &accumulate,        &sym2_eigenvalues,
                                 &sum,            &dot,               &minmax};
  return table;
}

}  // namespace jflow::simd
