#include "geodint/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geodint/error.hpp"
#include "geodint/matfun.hpp"
#include "geodint/parallel.hpp"

namespace geodint {

namespace {

constexpr int kMaxHalvings = 22;

template <class Field>
Vector rk4_compensated(const Field& F, const Vector& y0, double T, long long steps) {
  const double h = T / static_cast<double>(steps);
  const std::size_t d = y0.size();
  Vector y = y0;
  Vector comp(d);
  Vector tmp(d);
  for (long long n = 0; n < steps; ++n) {
    const Vector k1 = F(y);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const Vector k2 = F(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const Vector k3 = F(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
    const Vector k4 = F(tmp);
    for (std::size_t i = 0; i < d; ++i) {
      const double inc = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) - comp[i];
      const double t = y[i] + inc;
      comp[i] = (t - y[i]) - inc;
      y[i] = t;
    }
  }
  return y;
}

template <class Field>
Vector refine(const Field& F, const Vector& y0, double T, double target_tol) {
  if (!(target_tol > 0.0)) throw Error(ErrorKind::Config, "reference tolerance must be positive");
  if (T == 0.0) return y0;
  long long steps = std::max<long long>(8, static_cast<long long>(std::ceil(std::abs(T) / 0.05)));
  Vector coarse = rk4_compensated(F, y0, T, steps);
  double diff = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kMaxHalvings; ++k) {
    steps *= 2;
    Vector fine = rk4_compensated(F, y0, T, steps);
    diff = max_abs_diff(fine, coarse);
    if (diff <= target_tol * std::max(1.0, fine.norm_inf())) return fine;
    coarse = std::move(fine);
  }
  throw NoConvergence(kMaxHalvings, diff, "reference solution did not settle");
}

template <class ResidualFn, class FieldFn, class JacFn>
double probe(const ResidualFn& G, const FieldFn& F, const JacFn& J, const Vector& ybar, double h) {
  const std::size_t d = ybar.size();
  const Vector g0 = G(ybar, ybar);
  Matrix g1(d), g2(d);
  for (std::size_t j = 0; j < d; ++j) {
    Vector plus = ybar, minus = ybar;
    plus[j] += kProbeSize;
    minus[j] -= kProbeSize;
    const Vector a = G(plus, ybar) - G(minus, ybar);
    const Vector b = G(ybar, plus) - G(ybar, minus);
    for (std::size_t i = 0; i < d; ++i) {
      g1(i, j) = a[i] / (2.0 * kProbeSize);
      g2(i, j) = b[i] / (2.0 * kProbeSize);
    }
  }
  const LuFactorization lu(g2);
  const Matrix M = -lu.solve(g1);
  const Vector c = -lu.solve(g0);
  const Matrix Fp = J(ybar);
  const ExpPhi1 ep = expm_phi1(h * Fp);
  const Vector c_exact = h * (ep.phi1 * F(ybar));
  return std::max(max_abs_diff(M, ep.exp), max_abs_diff(c, c_exact));
}

}  // namespace

Vector reference_solve(const VectorField& field, const Vector& y0, double T, double target_tol) {
  require_dim(y0.size(), field.dim, "initial state");
  if (field.linear) return exact_step_linear(*field.linear, y0, T);
  return refine(field.F, y0, T, target_tol);
}

Vector reference_solve(const HamiltonianSystem& sys, const Vector& y0, double T, double target_tol) {
  require_dim(y0.size(), sys.dim(), "initial state");
  if (sys.linear) return exact_step_linear(*sys.linear, y0, T);
  return refine([&sys](const Vector& y) { return hamiltonian_field(sys, y); }, y0, T, target_tol);
}

OrderEstimate fit_order(std::vector<std::pair<double, double>> errors) {
  if (errors.size() < 4) throw Error(ErrorKind::Config, "need ≥ 4 step sizes");
  OrderEstimate est;
  est.errors = errors;
  std::sort(errors.begin(), errors.end());
  if (errors.back().second > kPreAsymptoticError) errors.pop_back();
  est.points_used = errors.size();
  const double n = static_cast<double>(errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx, ly;
  for (const auto& [h, e] : errors) {
    const double x = std::log10(h);
    const double y = std::log10(std::max(e, std::numeric_limits<double>::min()));
    lx.push_back(x);
    ly.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  est.slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  const double icept = (sy - est.slope * sx) / n;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    est.fit_residual = std::max(est.fit_residual, std::abs(ly[i] - (icept + est.slope * lx[i])));
  }
  return est;
}

OrderEstimate convergence_order(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y0, double T,
                                const std::vector<double>& h_list, const SolverConfig& cfg) {
  if (h_list.size() < 4) throw Error(ErrorKind::Config, "need ≥ 4 step sizes");
  std::vector<long long> counts;
  for (double h : h_list) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::Config, "step sizes must be positive");
    const double ratio = T / h;
    const long long n = std::llround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
      throw Error(ErrorKind::Config, "T must be an integer multiple of every step size");
    }
    counts.push_back(n);
  }
  const Vector ref = reference_solve(sys, y0, T, 1e-13);
  std::vector<std::pair<double, double>> errors(h_list.size());
  parallel_for(h_list.size(), [&](std::size_t i) {
    const std::vector<double> schedule(static_cast<std::size_t>(counts[i]), h_list[i]);
    const Trajectory traj = integrate(scheme, sys, y0, schedule, cfg);
    errors[i] = {h_list[i], (traj.states.back() - ref).norm2()};
  });
  return fit_order(std::move(errors));
}

DriftReport energy_drift_detail(const Trajectory& traj, const HamiltonianSystem& sys) {
  DriftReport rep;
  if (traj.states.empty()) return rep;
  const bool cached = traj.energies.size() == traj.states.size();
  const double h0 = cached ? traj.energies[0] : sys.H(traj.states[0]);
  const double scale = std::max(1.0, std::abs(h0));
  for (std::size_t n = 1; n < traj.states.size(); ++n) {
    const double hn = cached ? traj.energies[n] : sys.H(traj.states[n]);
    const double d = std::abs(hn - h0) / scale;
    if (d > rep.drift) {
      rep.drift = d;
      rep.argmax_step = n;
    }
  }
  return rep;
}

double energy_drift(const Trajectory& traj, const HamiltonianSystem& sys) {
  return energy_drift_detail(traj, sys).drift;
}

double local_exactness_probe(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y_bar, double h) {
  require_dim(y_bar.size(), sys.dim(), "reference point");
  return probe([&](const Vector& a, const Vector& b) { return scheme_residual(scheme, sys, a, b, y_bar, h); },
               [&](const Vector& y) { return hamiltonian_field(sys, y); },
               [&](const Vector& y) { return hamiltonian_jacobian(sys, y); }, y_bar, h);
}

double local_exactness_probe(const Scheme& scheme, const VectorField& field, const Vector& y_bar, double h) {
  require_dim(y_bar.size(), field.dim, "reference point");
  return probe([&](const Vector& a, const Vector& b) { return scheme_residual(scheme, field, a, b, y_bar, h); },
               field.F, field.jacobian, y_bar, h);
}

}  // namespace geodint
