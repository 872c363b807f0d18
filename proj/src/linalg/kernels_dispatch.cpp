#include "adnewton/error.hpp"
#include "adnewton/linalg/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace adnewton::kernels {

#ifndef ADNEWTON_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool avx2_available() {
  if (avx2_table() == nullptr) return false;
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const KernelTable* detect() {
  if (const char* env = std::getenv("ADNEWTON_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_available()) return avx2_table();
  }
  return avx2_available() ? avx2_table() : &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void select_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      slot().store(&scalar_table(), std::memory_order_release);
      return;
    case Backend::avx2:
      if (!avx2_available()) throw UsageError("AVX2/FMA kernels are not available on this machine");
      slot().store(avx2_table(), std::memory_order_release);
      return;
  }
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

}  // namespace adnewton::kernels
