#pragma once

#include <utility>
#include <vector>

#include "geodint/integrators.hpp"

namespace geodint {

// Classical fourth-order Runge-Kutta with compensated summation, the step
// count doubled until two successive answers agree to target_tol (relative to
// max(1, |y|)). Linear problems use the closed-form flow instead.
Vector reference_solve(const VectorField& field, const Vector& y0, double T, double target_tol = 1e-13);
Vector reference_solve(const HamiltonianSystem& sys, const Vector& y0, double T, double target_tol = 1e-13);

struct OrderEstimate {
  double slope = 0.0;
  std::vector<std::pair<double, double>> errors;  // (h, Euclidean endpoint error), every h requested
  double fit_residual = 0.0;                      // max |residual| of the fit, log10 units
  std::size_t points_used = 0;                    // the largest h is dropped when its error exceeds 0.5
  bool reliable() const noexcept { return fit_residual <= 0.1; }
};

inline constexpr double kPreAsymptoticError = 0.5;

OrderEstimate convergence_order(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y0, double T,
                                const std::vector<double>& h_list, const SolverConfig& cfg = {});

// Fit of log(err) against log(h) with the pre-asymptotic rule applied.
OrderEstimate fit_order(std::vector<std::pair<double, double>> errors);

struct DriftReport {
  double drift = 0.0;
  std::size_t argmax_step = 0;
};

// max_n |H(y_n) - H(y_0)| / max(1, |H(y_0)|)
double energy_drift(const Trajectory& traj, const HamiltonianSystem& sys);
DriftReport energy_drift_detail(const Trajectory& traj, const HamiltonianSystem& sys);

inline constexpr double kProbeSize = 1e-4;

// Linearizes the scheme's defining equation G(y_n, y_{n+1}) = 0 around
// (y_bar, y_bar) with the coefficient frozen at y_bar, recovers the affine
// map y_{n+1} - y_bar = M (y_n - y_bar) + c and returns the largest entry of
// M - e^{hF'} and c - h phi1(hF') F(y_bar).
double local_exactness_probe(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y_bar, double h);
double local_exactness_probe(const Scheme& scheme, const VectorField& field, const Vector& y_bar, double h);

}  // namespace geodint
