#pragma once

#include "geodint/linalg.hpp"

namespace geodint {

// x' = A x + b
struct LinearSystem {
  LinearSystem(Matrix a, Vector b);

  Matrix A;
  Vector b;
};

// Flow of the linear system over time h (any sign).
Vector exact_step_linear(const LinearSystem& sys, const Vector& x, double h);
// h * phi1(hA), the matrix that replaces the time step in x' = x + Delta (Ax + b).
Matrix exact_delta(const LinearSystem& sys, double h);

// x'' + Omega^2 x = a
class HarmonicOscillator {
 public:
  HarmonicOscillator(Matrix omega, Vector a);

  const Matrix& omega() const noexcept { return omega_; }
  const Matrix& omega_squared() const noexcept { return omega2_; }
  const Vector& a() const noexcept { return a_; }
  bool symmetric() const noexcept { return symmetric_; }
  std::size_t dim() const noexcept { return omega_.dim(); }

 private:
  Matrix omega_;
  Matrix omega2_;
  Vector a_;
  bool symmetric_;
};

struct PhasePoint {
  Vector x;
  Vector p;
};

PhasePoint exact_step_oscillator(const HarmonicOscillator& osc, const Vector& x, const Vector& p, double h);

// 1/2 <p,p> + 1/2 <x, Omega^2 x> - <x, a>; requires a symmetric Omega.
double oscillator_energy(const HarmonicOscillator& osc, const Vector& x, const Vector& p);

}  // namespace geodint
