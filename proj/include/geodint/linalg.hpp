#pragma once

// Dense real vectors and square matrices sized for small systems (d up to a
// few dozen). Storage is inline up to a fixed capacity so that the hot loops
// of the integrators do not touch the heap.

#include <algorithm>
#include <array>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string_view>

namespace geodint {

namespace detail {

template <std::size_t Inline>
class Storage {
 public:
  Storage() = default;
  explicit Storage(std::size_t n, double value = 0.0) : size_(n) {
    if (n > Inline) heap_ = std::make_unique<double[]>(n);
    std::fill_n(data(), n, value);
  }
  Storage(const Storage& other) : Storage(other.size_) { std::copy_n(other.data(), size_, data()); }
  Storage(Storage&& other) noexcept : size_(other.size_), heap_(std::move(other.heap_)) {
    if (!heap_) std::copy_n(other.inline_.data(), size_, inline_.data());
    other.size_ = 0;
  }
  Storage& operator=(const Storage& other) {
    if (this != &other) {
      Storage tmp(other);
      *this = std::move(tmp);
    }
    return *this;
  }
  Storage& operator=(Storage&& other) noexcept {
    if (this != &other) {
      size_ = other.size_;
      heap_ = std::move(other.heap_);
      if (!heap_) std::copy_n(other.inline_.data(), size_, inline_.data());
      other.size_ = 0;
    }
    return *this;
  }

  std::size_t size() const noexcept { return size_; }
  double* data() noexcept { return heap_ ? heap_.get() : inline_.data(); }
  const double* data() const noexcept { return heap_ ? heap_.get() : inline_.data(); }

 private:
  std::size_t size_ = 0;
  std::unique_ptr<double[]> heap_;
  std::array<double, Inline> inline_;
};

}  // namespace detail

class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double value = 0.0) : data_(n, value) {}
  Vector(std::initializer_list<double> values);
  explicit Vector(std::span<const double> values);

  std::size_t size() const noexcept { return data_.size(); }
  double operator[](std::size_t i) const noexcept { return data_.data()[i]; }
  double& operator[](std::size_t i) noexcept { return data_.data()[i]; }
  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }
  std::span<const double> values() const noexcept { return {data(), size()}; }
  std::span<double> values() noexcept { return {data(), size()}; }
  const double* begin() const noexcept { return data(); }
  const double* end() const noexcept { return data() + size(); }
  double* begin() noexcept { return data(); }
  double* end() noexcept { return data() + size(); }

  Vector segment(std::size_t offset, std::size_t n) const;
  void set_segment(std::size_t offset, const Vector& v);

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  bool all_finite() const noexcept;
  double norm_inf() const noexcept;
  double norm2() const noexcept;

  friend bool operator==(const Vector& a, const Vector& b) noexcept;

 private:
  detail::Storage<16> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator-(Vector a);
Vector operator*(double s, Vector a);
double dot(const Vector& a, const Vector& b);
Vector concat(const Vector& a, const Vector& b);

// Square row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double value = 0.0) : n_(n), data_(n * n, value) {}

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t n) { return Matrix(n); }
  static Matrix diagonal(const Vector& d);
  // Builds from nested rows; rejects non-square shapes and non-finite entries.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  // [[a11, a12], [a21, a22]] with equally sized square blocks.
  static Matrix from_blocks(const Matrix& a11, const Matrix& a12, const Matrix& a21, const Matrix& a22);

  std::size_t dim() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_.data()[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_.data()[i * n_ + j]; }
  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t n) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix transpose() const;
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector& v);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);
  // this += s * I
  Matrix& add_identity(double s);

  bool all_finite() const noexcept;
  double norm1() const noexcept;
  double norm_inf() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const Matrix& a, const Matrix& b) noexcept;

 private:
  std::size_t n_ = 0;
  detail::Storage<64> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);
Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(double s, Matrix a);

double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(const Vector& a, const Vector& b);

// Throws Error(NonFinite) naming `what` when any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);
[[noreturn]] void throw_dim_mismatch(std::size_t actual, std::size_t expected, std::string_view what);
// Throws Error(DimensionMismatch) unless the sizes agree.
inline void require_dim(std::size_t actual, std::size_t expected, std::string_view what) {
  if (actual != expected) throw_dim_mismatch(actual, expected, what);
}

}  // namespace geodint
