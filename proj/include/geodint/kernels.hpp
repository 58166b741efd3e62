#pragma once

#include <cstddef>

// Dense kernels for the small square products inside the matrix functions.
// Every table computes the same quantities; the vector variants may differ
// from the scalar reference in the last few bits because of FMA contraction
// and a different summation order.

namespace geodint::kernels {

struct Table {
  const char* name;
  // c = a * b for n×n row-major matrices; c must not alias a or b.
  void (*gemm)(std::size_t n, const double* a, const double* b, double* c);
  // y = a * x; y must not alias x.
  void (*gemv)(std::size_t n, const double* a, const double* x, double* y);
  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  double (*dot)(std::size_t n, const double* x, const double* y);
};

const Table& scalar();
// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const Table* avx2();

// Chosen once per process. GEODINT_SIMD=scalar|avx2 overrides detection.
const Table& active();

}  // namespace geodint::kernels
