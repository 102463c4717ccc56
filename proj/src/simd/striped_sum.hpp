#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "jflow/simd/kernels.hpp"

namespace jflow::simd::detail {

// Neumaier running sum for one lane. The branch-free select is mirrored
// exactly by the vector variants.
struct NeumaierLane {
  double s = 0.0;
  double c = 0.0;

  void add(double x) {
    const double t = s + x;
    const bool s_dominates = std::fabs(s) >= std::fabs(x);
    const double big = s_dominates ? s : x;
    const double small = s_dominates ? x : s;
    c += (big - t) + small;
    s = t;
  }
};

using Lanes = std::array<NeumaierLane, kReductionLanes>;

inline double finish(const Lanes& lanes) {
  NeumaierLane total;
  double correction = 0.0;
  for (const auto& lane : lanes) {
    total.add(lane.s);
    correction += lane.c;
  }
  return total.s + (total.c + correction);
}

}  // namespace jflow::simd::detail
