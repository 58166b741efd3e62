#pragma once

#include <functional>

#include "geodint/linalg.hpp"

namespace geodint {

enum class Predictor { ExponentialEuler, ForwardEuler };

struct SolverConfig {
  double tol = 1e-13;
  int max_iter = 50;
  Predictor predictor = Predictor::ExponentialEuler;
};

// Throws Error(Config) unless tol > 0 and max_iter >= 1.
void validate(const SolverConfig& cfg);

struct SolveResult {
  Vector y;
  int iterations = 0;
  double residual = 0.0;
};

using ResidualMap = std::function<Vector(const Vector&)>;
// Builds the iteration matrix at y, where r is the residual at y.
using JacobianMap = std::function<Matrix(const Vector& y, const Vector& r)>;

// Forward differences of residual around y with steps sqrt(eps) max(1, |y_j|).
Matrix fd_jacobian(const ResidualMap& residual, const Vector& y, const Vector& r);

// Simplified Newton iteration on r(y) = 0 with a forward-difference Jacobian
// refreshed every few iterations and step halving when the residual grows.
// Stops once ||r||_inf <= tol (1 + ||y||_inf), where the guess itself may
// already qualify, or once a Newton correction from a freshly built Jacobian
// is below the same bound. Throws NoConvergence after cfg.max_iter updates.
// A custom jacobian replaces the default fd_jacobian of residual.
SolveResult solve_implicit(const ResidualMap& residual, const Vector& y_guess, const SolverConfig& cfg,
                           const JacobianMap& jacobian = {});

}  // namespace geodint
