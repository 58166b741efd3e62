#include "geodint/disgrad.hpp"

#include <cmath>

namespace geodint {

namespace {

double partial(const HamiltonianSystem& sys, const Vector& y, std::size_t j) {
  return j < sys.m ? sys.Hx(y)[j] : sys.Hp(y)[j - sys.m];
}

}  // namespace

double increment_quotient(const HamiltonianSystem& sys, const Vector& a, std::size_t j, double target,
                          double h_a, double h_target) {
  const double diff = target - a[j];
  const double scale = 1.0 + std::abs(a[j]);
  if (std::abs(diff) < kIncrementLimitThreshold * scale) return partial(sys, a, j);
  if (std::abs(diff) < kQuadratureWindow * scale) {
    static constexpr double kNode = 0.3872983346207417;  // sqrt(3/5) / 2
    static constexpr double kW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    static constexpr double kT[3] = {0.5 - kNode, 0.5, 0.5 + kNode};
    Vector q = a;
    double mean = 0.0;
    for (int k = 0; k < 3; ++k) {
      q[j] = a[j] + kT[k] * diff;
      mean += kW[k] * partial(sys, q, j);
    }
    return mean;
  }
  return (h_target - h_a) / diff;
}

Vector increment_gradient(const HamiltonianSystem& sys, const Vector& y_n, const Vector& y_np1) {
  require_dim(y_n.size(), sys.dim(), "y_n");
  require_dim(y_np1.size(), sys.dim(), "y_n+1");
  require_finite(y_n, "y_n");
  require_finite(y_np1, "y_n+1");

  const std::size_t d = sys.dim();
  Vector g(d);
  Vector hat = y_n;
  double h_prev = sys.H(hat);
  for (std::size_t j = 0; j < d; ++j) {
    if (y_np1[j] == hat[j]) {
      g[j] = partial(sys, hat, j);
      continue;
    }
    Vector next = hat;
    next[j] = y_np1[j];
    const double h_next = sys.H(next);
    g[j] = increment_quotient(sys, hat, j, y_np1[j], h_prev, h_next);
    hat = std::move(next);
    h_prev = h_next;
  }
  require_finite(g, "discrete gradient");
  return g;
}

Vector symmetric_gradient(const HamiltonianSystem& sys, const Vector& y_n, const Vector& y_np1) {
  const Vector fwd = increment_gradient(sys, y_n, y_np1);
  const Vector bwd = increment_gradient(sys, y_np1, y_n);
  Vector g(fwd.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = 0.5 * (fwd[j] + bwd[j]);
  return g;
}

LinearizationTriple linearization_matrices(const Matrix& hess) {
  const std::size_t d = hess.dim();
  LinearizationTriple t{Matrix(d), Matrix(d), Matrix(d)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < i; ++j) t.A(i, j) = hess(i, j);
    t.A(i, i) = 0.5 * hess(i, i);
  }
  t.B = t.A.transpose();
  t.R = t.A - t.B;
  return t;
}

LinearizationTriple linearization_matrices(const HamiltonianSystem& sys, const Vector& y_bar) {
  const Matrix hess = full_hessian(sys, y_bar);
  require_finite(hess, "Hessian");
  return linearization_matrices(hess);
}

}  // namespace geodint
