#include "geodint/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "geodint/error.hpp"
#include "geodint/matfun.hpp"

namespace geodint {

namespace {

constexpr int kRefreshEvery = 5;
constexpr double kMinDamping = 1.0 / 1024.0;

bool converged(double res, const Vector& y, double tol) { return res <= tol * (1.0 + y.norm_inf()); }

double trial_norm(const ResidualMap& residual, const Vector& y, Vector& r) {
  try {
    r = residual(y);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  const double n = r.norm_inf();
  return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
}

}  // namespace

Matrix fd_jacobian(const ResidualMap& residual, const Vector& y, const Vector& r0) {
  const std::size_t d = y.size();
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Matrix j(d);
  Vector probe = y;
  for (std::size_t c = 0; c < d; ++c) {
    const double step = root_eps * std::max(1.0, std::abs(y[c]));
    probe[c] = y[c] + step;
    const double actual = probe[c] - y[c];
    const Vector rc = residual(probe);
    for (std::size_t i = 0; i < d; ++i) j(i, c) = (rc[i] - r0[i]) / actual;
    probe[c] = y[c];
  }
  return j;
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw Error(ErrorKind::Config, "solver tolerance must be positive");
  if (cfg.max_iter < 1) throw Error(ErrorKind::Config, "solver needs max_iter >= 1");
}

SolveResult solve_implicit(const ResidualMap& residual, const Vector& y_guess, const SolverConfig& cfg,
                           const JacobianMap& jacobian) {
  validate(cfg);
  Vector y = y_guess;
  Vector r = residual(y);
  double res = r.norm_inf();
  if (!std::isfinite(res)) throw Error(ErrorKind::NonFinite, "residual at the predictor is not finite");
  if (converged(res, y, cfg.tol)) return {y, 0, res};

  std::optional<LuFactorization> lu;
  int age = kRefreshEvery;
  int it = 0;
  Vector trial_r;
  while (it < cfg.max_iter) {
    if (age >= kRefreshEvery || !lu) {
      try {
        lu.emplace(jacobian ? jacobian(y, r) : fd_jacobian(residual, y, r));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularMatrix) throw;
        throw NoConvergence(it, res, "singular Jacobian");
      }
      age = 0;
    }
    const Vector dy = lu->solve(r);
    if (age == 0 && dy.norm_inf() <= cfg.tol * (1.0 + y.norm_inf())) {
      // The residual sits on the rounding floor of the difference quotients;
      // a fresh Newton correction this small means y is already converged.
      Vector yc = y - dy;
      Vector rc;
      const double rc_norm = trial_norm(residual, yc, rc);
      if (std::isfinite(rc_norm)) return {yc, it + 1, rc_norm};
    }
    double lambda = 1.0;
    Vector trial;
    double trial_res = std::numeric_limits<double>::infinity();
    while (true) {
      trial = y;
      for (std::size_t i = 0; i < y.size(); ++i) trial[i] -= lambda * dy[i];
      trial_res = trial_norm(residual, trial, trial_r);
      if (trial_res < res || lambda <= kMinDamping) break;
      lambda *= 0.5;
    }
    ++it;
    ++age;
    if (!(trial_res < res) && age > 1) {
      // Stale Jacobian did not give a decrease; rebuild it before moving.
      age = kRefreshEvery;
      continue;
    }
    if (!std::isfinite(trial_res)) continue;
    y = std::move(trial);
    r = trial_r;
    res = trial_res;
    if (converged(res, y, cfg.tol)) return {y, it, res};
  }
  throw NoConvergence(it, res);
}

}  // namespace geodint
