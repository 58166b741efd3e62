#include "geodint/linalg.hpp"

#include <cmath>
#include <string>

#include "geodint/error.hpp"
#include "geodint/kernels.hpp"

namespace geodint {

Vector::Vector(std::initializer_list<double> values) : data_(values.size()) {
  std::copy(values.begin(), values.end(), data());
}

Vector::Vector(std::span<const double> values) : data_(values.size()) {
  std::copy(values.begin(), values.end(), data());
}

Vector Vector::segment(std::size_t offset, std::size_t n) const {
  Vector out(n);
  std::copy_n(data() + offset, n, out.data());
  return out;
}

void Vector::set_segment(std::size_t offset, const Vector& v) {
  std::copy_n(v.data(), v.size(), data() + offset);
}

Vector& Vector::operator+=(const Vector& other) {
  require_dim(other.size(), size(), "vector sum");
  for (std::size_t i = 0; i < size(); ++i) (*this)[i] += other[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_dim(other.size(), size(), "vector difference");
  for (std::size_t i = 0; i < size(); ++i) (*this)[i] -= other[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& v : *this) v *= s;
  return *this;
}

bool Vector::all_finite() const noexcept {
  for (double v : *this) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Vector::norm_inf() const noexcept {
  double m = 0.0;
  for (double v : *this) m = std::max(m, std::abs(v));
  return m;
}

double Vector::norm2() const noexcept {
  double s = 0.0;
  for (double v : *this) s += v * v;
  return std::sqrt(s);
}

bool operator==(const Vector& a, const Vector& b) noexcept {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator-(Vector a) { return a *= -1.0; }
Vector operator*(double s, Vector a) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
  require_dim(b.size(), a.size(), "dot product");
  return kernels::active().dot(a.size(), a.data(), b.data());
}

Vector concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out.set_segment(0, a);
  out.set_segment(a.size(), b);
  return out;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "matrix rows must form a square array");
    }
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  require_finite(m, "matrix");
  return m;
}

Matrix Matrix::from_blocks(const Matrix& a11, const Matrix& a12, const Matrix& a21, const Matrix& a22) {
  const std::size_t k = a11.dim();
  require_dim(a12.dim(), k, "block (1,2)");
  require_dim(a21.dim(), k, "block (2,1)");
  require_dim(a22.dim(), k, "block (2,2)");
  Matrix m(2 * k);
  m.set_block(0, 0, a11);
  m.set_block(0, k, a12);
  m.set_block(k, 0, a21);
  m.set_block(k, k, a22);
  return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t n) const {
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(data() + (r0 + i) * n_ + c0, n, out.data() + i * n);
  }
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  const std::size_t n = b.dim();
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(b.data() + i * n, n, data() + (r0 + i) * n_ + c0);
  }
}

Matrix Matrix::transpose() const {
  Matrix t(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(n_);
  for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = v[i];
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_dim(other.dim(), n_, "matrix sum");
  double* d = data();
  const double* o = other.data();
  for (std::size_t i = 0; i < n_ * n_; ++i) d[i] += o[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_dim(other.dim(), n_, "matrix difference");
  double* d = data();
  const double* o = other.data();
  for (std::size_t i = 0; i < n_ * n_; ++i) d[i] -= o[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  double* d = data();
  for (std::size_t i = 0; i < n_ * n_; ++i) d[i] *= s;
  return *this;
}

Matrix& Matrix::add_identity(double s) {
  for (std::size_t i = 0; i < n_; ++i) (*this)(i, i) += s;
  return *this;
}

bool Matrix::all_finite() const noexcept {
  const double* d = data();
  for (std::size_t i = 0; i < n_ * n_; ++i) {
    if (!std::isfinite(d[i])) return false;
  }
  return true;
}

double Matrix::norm1() const noexcept {
  double best = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::norm_inf() const noexcept {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  const double* d = data();
  for (std::size_t i = 0; i < n_ * n_; ++i) m = std::max(m, std::abs(d[i]));
  return m;
}

bool operator==(const Matrix& a, const Matrix& b) noexcept {
  return a.dim() == b.dim() && std::equal(a.data(), a.data() + a.dim() * a.dim(), b.data());
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_dim(b.dim(), a.dim(), "matrix product");
  Matrix c(a.dim());
  kernels::active().gemm(a.dim(), a.data(), b.data(), c.data());
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  require_dim(x.size(), a.dim(), "matrix-vector product");
  Vector y(a.dim());
  kernels::active().gemv(a.dim(), a.data(), x.data(), y.data());
  return y;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(double s, Matrix a) { return a *= s; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_dim(b.dim(), a.dim(), "max_abs_diff");
  return (a - b).max_abs();
}

double max_abs_diff(const Vector& a, const Vector& b) {
  require_dim(b.size(), a.size(), "max_abs_diff");
  return (a - b).norm_inf();
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, std::string(what) + " has a non-finite entry");
}

void require_finite(const Vector& v, std::string_view what) {
  if (!v.all_finite()) throw Error(ErrorKind::NonFinite, std::string(what) + " has a non-finite entry");
}

void throw_dim_mismatch(std::size_t actual, std::size_t expected, std::string_view what) {
  throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected dimension " + std::to_string(expected) +
                                                ", got " + std::to_string(actual));
}

}  // namespace geodint
