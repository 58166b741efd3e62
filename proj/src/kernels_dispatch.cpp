#include <cstdlib>
#include <string_view>

#include "geodint/kernels.hpp"

namespace geodint::kernels {

#if defined(GEODINT_HAVE_AVX2_KERNELS)
extern const Table kAvx2Table;
#endif

const Table* avx2() {
#if defined(GEODINT_HAVE_AVX2_KERNELS)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& chosen = [] () -> const Table& {
    const char* env = std::getenv("GEODINT_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar();
    if (const Table* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace geodint::kernels
