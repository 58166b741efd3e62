#include "geodint/exact_linear.hpp"

#include <cmath>

#include "geodint/error.hpp"
#include "geodint/matfun.hpp"

namespace geodint {

LinearSystem::LinearSystem(Matrix a, Vector b_) : A(std::move(a)), b(std::move(b_)) {
  require_dim(b.size(), A.dim(), "linear system offset");
  require_finite(A, "linear system matrix");
  require_finite(b, "linear system offset");
}

Vector exact_step_linear(const LinearSystem& sys, const Vector& x, double h) {
  require_dim(x.size(), sys.A.dim(), "state");
  require_finite(x, "state");
  if (!std::isfinite(h)) throw Error(ErrorKind::NonFinite, "time step is not finite");
  const ExpPhi1 ep = expm_phi1(h * sys.A);
  Vector out = ep.exp * x;
  out += h * (ep.phi1 * sys.b);
  require_finite(out, "linear step result");
  return out;
}

Matrix exact_delta(const LinearSystem& sys, double h) {
  if (!std::isfinite(h)) throw Error(ErrorKind::NonFinite, "time step is not finite");
  return h * phi1(h * sys.A);
}

HarmonicOscillator::HarmonicOscillator(Matrix omega, Vector a)
    : omega_(std::move(omega)), a_(std::move(a)), symmetric_(true) {
  require_dim(a_.size(), omega_.dim(), "oscillator forcing");
  require_finite(omega_, "Omega");
  require_finite(a_, "oscillator forcing");
  omega2_ = omega_ * omega_;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(omega_(i, j) - omega_(j, i)) > 1e-13) symmetric_ = false;
    }
  }
}

namespace {

struct TrigBlocks {
  Matrix cos;   // cos(z)
  Matrix sinc;  // sin(z)/z
  Matrix q;     // (1 - cos z)/z^2
};

// Functions of z with z^2 = w, by Taylor series after reducing ||w|| <= 1,
// then the double-angle relations s times.
TrigBlocks trig_of_square(const Matrix& w) {
  const std::size_t n = w.dim();
  const double norm = std::min(w.norm1(), w.norm_inf());
  int s = 0;
  while (std::ldexp(norm, -2 * s) > 1.0) ++s;
  const Matrix ws = std::ldexp(1.0, -2 * s) * w;

  constexpr int kTerms = 12;
  // coefficient of (-w)^k: 1/(2k)!, 1/(2k+1)!, 1/(2k+2)!
  double fc[kTerms], fs[kTerms], fq[kTerms];
  double f = 1.0;
  for (int k = 0; k < kTerms; ++k) {
    if (k > 0) f /= (2.0 * k - 1.0) * (2.0 * k);
    fc[k] = f;
    fs[k] = f / (2.0 * k + 1.0);
    fq[k] = fs[k] / (2.0 * k + 2.0);
  }
  const Matrix mw = -ws;
  Matrix c(n), sn(n), q(n);
  c.add_identity(fc[kTerms - 1]);
  sn.add_identity(fs[kTerms - 1]);
  q.add_identity(fq[kTerms - 1]);
  for (int k = kTerms - 2; k >= 0; --k) {
    c = c * mw;
    c.add_identity(fc[k]);
    sn = sn * mw;
    sn.add_identity(fs[k]);
    q = q * mw;
    q.add_identity(fq[k]);
  }
  for (int j = 0; j < s; ++j) {
    q = 0.5 * (sn * sn);
    sn = sn * c;
    c = 2.0 * (c * c);
    c.add_identity(-1.0);
  }
  return {c, sn, q};
}

bool is_zero(const Vector& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

}  // namespace

PhasePoint exact_step_oscillator(const HarmonicOscillator& osc, const Vector& x, const Vector& p, double h) {
  require_dim(x.size(), osc.dim(), "position");
  require_dim(p.size(), osc.dim(), "momentum");
  require_finite(x, "position");
  require_finite(p, "momentum");
  if (!std::isfinite(h)) throw Error(ErrorKind::NonFinite, "time step is not finite");
  const bool forced = !is_zero(osc.a());
  if (forced) {
    // Probe invertibility; the forcing terms carry Omega^{-1}.
    LuFactorization check(osc.omega());
  }
  const TrigBlocks t = trig_of_square((h * h) * osc.omega_squared());
  PhasePoint out;
  out.x = t.cos * x + h * (t.sinc * p);
  out.p = t.cos * p - h * (osc.omega_squared() * (t.sinc * x));
  if (forced) {
    out.x += (h * h) * (t.q * osc.a());
    out.p += h * (t.sinc * osc.a());
  }
  require_finite(out.x, "oscillator step");
  require_finite(out.p, "oscillator step");
  return out;
}

double oscillator_energy(const HarmonicOscillator& osc, const Vector& x, const Vector& p) {
  if (!osc.symmetric()) throw Error(ErrorKind::NotSymmetric, "oscillator energy needs a symmetric Omega");
  require_dim(x.size(), osc.dim(), "position");
  require_dim(p.size(), osc.dim(), "momentum");
  return 0.5 * dot(p, p) + 0.5 * dot(x, osc.omega_squared() * x) - dot(x, osc.a());
}

}  // namespace geodint
