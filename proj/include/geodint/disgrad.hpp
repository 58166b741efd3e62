#pragma once

#include "geodint/model.hpp"

namespace geodint {

// Coordinates closer than this (relative to 1 + |y_n^j|) use the derivative
// limit instead of a difference quotient.
inline constexpr double kIncrementLimitThreshold = 1e-12;
// Between the limit threshold and this window the quotient is replaced by the
// mean of the partial derivative along the segment (3-point Gauss-Legendre),
// which avoids the eps*|H|/|dy| cancellation of a plain difference.
inline constexpr double kQuadratureWindow = 1e-3;

// [H(a with a_j := target) - H(a)] / (target - a_j), given both energies.
double increment_quotient(const HamiltonianSystem& sys, const Vector& a, std::size_t j, double target,
                          double h_a, double h_target);

// Coordinate-increment discrete gradient in the ordering (x_1..x_m, p_1..p_m):
// component j is the quotient of H between the states that have the first j
// and the first j-1 coordinates replaced by those of y_np1.
Vector increment_gradient(const HamiltonianSystem& sys, const Vector& y_n, const Vector& y_np1);

// Mean of the increment gradient taken in both directions.
Vector symmetric_gradient(const HamiltonianSystem& sys, const Vector& y_n, const Vector& y_np1);

struct LinearizationTriple {
  Matrix A;  // strictly lower part of the Hessian plus half its diagonal
  Matrix B;  // transpose of A
  Matrix R;  // A - B
};

LinearizationTriple linearization_matrices(const HamiltonianSystem& sys, const Vector& y_bar);
LinearizationTriple linearization_matrices(const Matrix& hessian);

}  // namespace geodint
