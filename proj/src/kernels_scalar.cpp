#include "geodint/kernels.hpp"

namespace geodint::kernels {
namespace {

void gemm_ref(std::size_t n, const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < n * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      const double* bk = b + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

void gemv_ref(std::size_t n, const double* a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
    y[i] = s;
  }
}

void axpy_ref(std::size_t n, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double dot_ref(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

const Table kScalar{"scalar", gemm_ref, gemv_ref, axpy_ref, dot_ref};

}  // namespace

const Table& scalar() { return kScalar; }

}  // namespace geodint::kernels
