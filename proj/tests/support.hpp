#pragma once

// Test-side reference computations. Nothing here calls into the library's
// matrix functions: eigenvalues come from cyclic Jacobi rotations in long
// double and the exponential from a plain long Taylor sum.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "geodint/linalg.hpp"

namespace testing_support {

using geodint::Matrix;
using geodint::Vector;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  Vector vector(std::size_t n, double r) {
    Vector v(n);
    for (auto& x : v) x = uniform(-r, r);
    return v;
  }
  Matrix matrix(std::size_t n, double r) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(-r, r);
    return m;
  }
  Matrix symmetric(std::size_t n, double r) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(-r, r);
    return m;
  }
  // Rescaled so that max(norm1, norm_inf) equals target.
  Matrix matrix_with_norm(std::size_t n, double target) {
    Matrix m = matrix(n, 1.0);
    const double s = std::max(m.norm1(), m.norm_inf());
    return (target / s) * m;
  }

 private:
  std::mt19937_64 gen_;
};

using LMat = std::vector<std::vector<long double>>;

inline LMat to_long(const Matrix& m) {
  LMat a(m.dim(), std::vector<long double>(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) a[i][j] = m(i, j);
  return a;
}

inline Matrix to_double(const LMat& a) {
  Matrix m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = static_cast<double>(a[i][j]);
  return m;
}

inline LMat lmul(const LMat& a, const LMat& b) {
  const std::size_t n = a.size();
  LMat c(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

struct Eigen {
  std::vector<long double> values;
  LMat vectors;  // columns
};

// Cyclic Jacobi for symmetric matrices.
inline Eigen jacobi_eigen(const Matrix& sym) {
  const std::size_t n = sym.dim();
  LMat a = to_long(sym);
  LMat v(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0L;

  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0.0L;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-38L) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0L) continue;
        const long double theta = (a[q][q] - a[p][p]) / (2.0L * a[p][q]);
        const long double t =
            (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
        const long double c = 1.0L / std::sqrt(t * t + 1.0L);
        const long double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const long double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  Eigen e;
  e.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.values[i] = a[i][i];
  e.vectors = std::move(v);
  return e;
}

// Q f(Lambda) Q^T for a symmetric argument.
template <class F>
Matrix spectral_apply(const Matrix& sym, F f) {
  const Eigen e = jacobi_eigen(sym);
  const std::size_t n = sym.dim();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < n; ++k) s += e.vectors[i][k] * f(e.values[k]) * e.vectors[j][k];
      out(i, j) = static_cast<double>(s);
    }
  return out;
}

// sum_{k < terms} M^k / (k + offset)! in long double, intended for ||M|| <= 4.
inline Matrix taylor_series(const Matrix& m, int offset, int terms = 200) {
  const std::size_t n = m.dim();
  const LMat a = to_long(m);
  LMat power(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) power[i][i] = 1.0L;
  long double fact = 1.0L;
  for (int k = 2; k <= offset; ++k) fact *= k;
  LMat sum(n, std::vector<long double>(n, 0.0L));
  for (int k = 0; k < terms; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += power[i][j] / fact;
    power = lmul(power, a);
    fact *= static_cast<long double>(k + 1 + offset);
  }
  return to_double(sum);
}

inline Matrix taylor_expm(const Matrix& m) { return taylor_series(m, 0); }
inline Matrix taylor_phi1(const Matrix& m) { return taylor_series(m, 1); }

inline long double tanhc(long double z) { return z == 0.0L ? 1.0L : std::tanh(z) / z; }
inline long double tanc(long double z) { return z == 0.0L ? 1.0L : std::tan(z) / z; }
inline long double xcothx(long double z) { return z == 0.0L ? 1.0L : z / std::tanh(z); }

inline double rel_diff(const Matrix& a, const Matrix& b) {
  return geodint::max_abs_diff(a, b) / std::max(1.0, b.max_abs());
}

inline double rel_diff(const Vector& a, const Vector& b) {
  return geodint::max_abs_diff(a, b) / std::max(1.0, b.norm_inf());
}

}  // namespace testing_support
