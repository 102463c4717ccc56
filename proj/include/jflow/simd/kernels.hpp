#pragma once

// Data-parallel inner loops used by the grid code.
//
// Every kernel has a scalar reference implementation and optional AVX2 / NEON
// variants. The variants perform the same IEEE operations in the same order
// as the reference (no FMA contraction, identical lane striping for the
// reductions), so results are bit-identical whichever table is active.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace jflow::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

/// Number of accumulator lanes used by the striped reductions. Element i is
/// always accumulated into lane i % kReductionLanes.
inline constexpr std::size_t kReductionLanes = 4;

struct KernelTable {
  Isa isa;

  // out[i] = scale * ((plus[i] + minus[i]) - 2 * center[i])
  void (*second_difference)(const double* minus, const double* center, const double* plus,
                            double* out, std::size_t len, double scale);

  // out[i] = scale * (plus[i] - minus[i])
  void (*first_difference)(const double* minus, const double* plus, double* out,
                           std::size_t len, double scale);

  // out[i] = x[i] + a * y[i]
  void (*axpy)(const double* x, double a, const double* y, double* out, std::size_t len);

  // out[i] += a * x[i]
  void (*accumulate)(double* out, double a, const double* x, std::size_t len);

  // Ascending eigenvalues of [[a, b], [b, d]] per element.
  void (*sym2_eigenvalues)(const double* a, const double* b, const double* d, double* lo,
                           double* hi, std::size_t len);

  // Lane-striped Neumaier sum.
  double (*sum)(const double* x, std::size_t len);

  // Lane-striped Neumaier sum of x[i] * y[i].
  double (*dot)(const double* x, const double* y, std::size_t len);

  void (*minmax)(const double* x, std::size_t len, double* lo, double* hi);
};

const KernelTable& scalar_table();
#if defined(JFLOW_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(JFLOW_HAVE_NEON)
const KernelTable& neon_table();
#endif

/// Variants compiled in and supported by the running CPU, scalar first.
std::vector<Isa> available_isas();

/// Table for a specific ISA; throws std::invalid_argument if unavailable.
const KernelTable& table(Isa isa);

/// The table selected at first use: the widest supported ISA, unless the
/// JFLOW_ISA environment variable (scalar | avx2 | neon) says otherwise.
const KernelTable& active();

/// Overrides the active table (tests and benchmarks).
void set_active(Isa isa);

}  // namespace jflow::simd
