#pragma once

// Data-parallel loops over grid points and reductions whose result does not
// depend on the number of threads.

#include <cstddef>
#include <functional>
#include <span>

namespace jflow::parallel {

/// Worker count used by parallel_for. Defaults to JFLOW_THREADS, else the
/// hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned threads);

/// Loops shorter than this run on the calling thread.
std::size_t grain();
void set_grain(std::size_t points);

/// Calls body(begin, end) over disjoint ranges covering [0, n). Each item
/// is assumed to touch `points_per_item` grid points when deciding whether
/// to fan out. The first exception thrown (lowest range) is rethrown after
/// all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t points_per_item = 1);

/// Size of the fixed blocks that reductions split their input into. Block
/// partials are combined in index order, so the result is independent of
/// the thread count.
inline constexpr std::size_t kReductionBlock = 2048;

double sum(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace jflow::parallel
