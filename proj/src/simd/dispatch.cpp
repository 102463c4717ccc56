#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "jflow/simd/kernels.hpp"

namespace jflow::simd {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(JFLOW_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(JFLOW_HAVE_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("JFLOW_ISA"); env != nullptr && *env != '\0') {
    const std::string name(env);
    if (name == "scalar") return &table(Isa::Scalar);
    if (name == "avx2") return &table(Isa::Avx2);
    if (name == "neon") return &table(Isa::Neon);
    throw std::invalid_argument("JFLOW_ISA: unknown kernel set '" + name + "'");
  }
  const auto isas = available_isas();
  return &table(isas.back());
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
    case Isa::Neon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

const KernelTable& table(Isa isa) {
  if (!cpu_supports(isa)) {
    throw std::invalid_argument("kernel set '" + std::string(to_string(isa)) +
                                "' is not available on this build/CPU");
  }
  switch (isa) {
#if defined(JFLOW_HAVE_AVX2)
    case Isa::Avx2:
      return avx2_table();
#endif
#if defined(JFLOW_HAVE_NEON)
    case Isa::Neon:
      return neon_table();
#endif
    default:
      return scalar_table();
  }
}

const KernelTable& active() {
  const KernelTable* current = g_active.load(std::memory_order_acquire);
  if (current == nullptr) {
    const KernelTable* chosen = pick_default();
    if (g_active.compare_exchange_strong(current, chosen, std::memory_order_acq_rel)) {
      current = chosen;
    }
  }
  return *current;
}

void set_active(Isa isa) { g_active.store(&table(isa), std::memory_order_release); }

}  // namespace jflow::simd
