#include <immintrin.h>

#include "geodint/kernels.hpp"

namespace geodint::kernels {
namespace {

void gemm_avx2(std::size_t n, const double* a, const double* b, double* c) {
  const std::size_t nv = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c + i * n;
    std::size_t j = 0;
    for (; j < nv; j += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t k = 0; k < n; ++k) {
        acc = _mm256_fmadd_pd(_mm256_broadcast_sd(a + i * n + k), _mm256_loadu_pd(b + k * n + j), acc);
      }
      _mm256_storeu_pd(ci + j, acc);
    }
    for (; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s = __builtin_fma(a[i * n + k], b[k * n + j], s);
      ci[j] = s;
    }
  }
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(std::size_t n, const double* x, const double* y) {
  const std::size_t nv = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i < nv; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s = __builtin_fma(x[i], y[i], s);
  return s;
}

void gemv_avx2(std::size_t n, const double* a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = dot_avx2(n, a + i * n, x);
}

void axpy_avx2(std::size_t n, double alpha, const double* x, double* y) {
  const std::size_t nv = n & ~std::size_t{3};
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = __builtin_fma(alpha, x[i], y[i]);
}

}  // namespace

extern const Table kAvx2Table;
const Table kAvx2Table{"avx2", gemm_avx2, gemv_avx2, axpy_avx2, dot_avx2};

}  // namespace geodint::kernels
