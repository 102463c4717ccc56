#include "jflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jflow/simd/kernels.hpp"

namespace jflow::parallel {
namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("JFLOW_THREADS"); env != nullptr && *env != '\0') {
    const int parsed = std::atoi(env);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned> g_threads{0};
std::atomic<std::size_t> g_grain{1u << 15};

// Neumaier combination of block partials, in block order.
double combine(const std::vector<double>& partials) {
  double s = 0.0;
  double c = 0.0;
  for (double x : partials) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace

unsigned thread_count() {
  unsigned t = g_threads.load();
  if (t == 0) {
    t = default_threads();
    g_threads.store(t);
  }
  return t;
}

void set_thread_count(unsigned threads) {
  if (threads == 0) throw std::invalid_argument("thread count must be positive");
  g_threads.store(threads);
}

std::size_t grain() { return g_grain.load(); }

void set_grain(std::size_t points) { g_grain.store(std::max<std::size_t>(points, 1)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t points_per_item) {
  const std::size_t g = grain();
  const std::size_t work = n * std::max<std::size_t>(points_per_item, 1);
  const std::size_t workers =
      std::min<std::size_t>({thread_count(), (work + g - 1) / g, n});
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  const auto bound = [&](std::size_t w) { return n * w / workers; };
  const auto task = [&](std::size_t w) {
    try {
      body(bound(w), bound(w + 1));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(task, w);
    task(0);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Runs fn(b) for every block index; blocks are owned by the worker whose
// range contains their first element.
template <class Fn>
void for_each_block(std::size_t blocks, const Fn& fn) {
  parallel_for(blocks * kReductionBlock, [&](std::size_t begin, std::size_t end) {
    const std::size_t first = (begin + kReductionBlock - 1) / kReductionBlock;
    const std::size_t last = (end + kReductionBlock - 1) / kReductionBlock;
    for (std::size_t b = first; b < last; ++b) fn(b);
  });
}

double sum(std::span<const double> x) {
  const auto& k = simd::active();
  const std::size_t blocks = (x.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partials(blocks);
  for_each_block(blocks, [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    partials[b] = k.sum(x.data() + lo, std::min(kReductionBlock, x.size() - lo));
  });
  return combine(partials);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  const auto& k = simd::active();
  const std::size_t blocks = (x.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partials(blocks);
  for_each_block(blocks, [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    partials[b] = k.dot(x.data() + lo, y.data() + lo, std::min(kReductionBlock, x.size() - lo));
  });
  return combine(partials);
}

}  // namespace jflow::parallel
