#include "geodint/integrators.hpp"

#include <cassert>
#include <cmath>
#include <optional>

#include "geodint/disgrad.hpp"
#include "geodint/error.hpp"
#include "geodint/matfun.hpp"
#include "geodint/solver.hpp"

namespace geodint {

const char* to_string(Rule rule) noexcept {
  switch (rule) {
    case Rule::ExplicitEuler: return "explicit-euler";
    case Rule::ImplicitEuler: return "implicit-euler";
    case Rule::ImplicitMidpoint: return "midpoint";
    case Rule::Trapezoidal: return "trapezoidal";
    case Rule::ExponentialEuler: return "exp-euler";
    case Rule::GR1D_Symmetric: return "gr1d-sym";
    case Rule::GR1D_Increment: return "gr1d-incre";
    case Rule::GRmulti_Symmetric: return "grmulti-sym";
    case Rule::GRmulti_Increment: return "grmulti-incre";
    case Rule::GRmulti_Separable: return "grmulti-sep";
  }
  return "?";
}

const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> rules{Rule::ExplicitEuler,     Rule::ImplicitEuler,     Rule::ImplicitMidpoint,
                                       Rule::Trapezoidal,       Rule::ExponentialEuler,  Rule::GR1D_Symmetric,
                                       Rule::GR1D_Increment,    Rule::GRmulti_Symmetric, Rule::GRmulti_Increment,
                                       Rule::GRmulti_Separable};
  return rules;
}

std::optional<Rule> rule_from_string(std::string_view name) noexcept {
  for (Rule r : all_rules()) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

bool applicable(Rule rule, const HamiltonianSystem& sys) noexcept {
  switch (rule) {
    case Rule::GR1D_Symmetric:
    case Rule::GR1D_Increment: return sys.m == 1;
    case Rule::GRmulti_Separable: return sys.separable;
    default: return true;
  }
}

bool is_discrete_gradient(Rule rule) noexcept {
  switch (rule) {
    case Rule::GR1D_Symmetric:
    case Rule::GR1D_Increment:
    case Rule::GRmulti_Symmetric:
    case Rule::GRmulti_Increment:
    case Rule::GRmulti_Separable: return true;
    default: return false;
  }
}

bool is_implicit(Rule rule) noexcept {
  return rule != Rule::ExplicitEuler && rule != Rule::ExponentialEuler;
}

RefPolicy default_policy(Rule rule) {
  switch (rule) {
    case Rule::ImplicitEuler: return RefPolicy::next();
    case Rule::ImplicitMidpoint:
    case Rule::Trapezoidal:
    case Rule::GR1D_Symmetric:
    case Rule::GRmulti_Symmetric:
    case Rule::GRmulti_Separable: return RefPolicy::midpoint();
    default: return RefPolicy::current();
  }
}

void validate(const Scheme& scheme, std::size_t dim) {
  if (scheme.rule == Rule::ExponentialEuler &&
      (!scheme.locally_exact || scheme.policy.tag != RefPolicy::Tag::Current)) {
    throw Error(ErrorKind::Config, "exp-euler is locally exact at the current point by definition");
  }
  if (scheme.policy.tag == RefPolicy::Tag::Fixed) require_dim(scheme.policy.point.size(), dim, "fixed reference");
}

namespace {

// ------------------------------------------------------------ field access

struct FieldFns {
  const VectorField* vf = nullptr;
  const HamiltonianSystem* hs = nullptr;

  Vector F(const Vector& y) const {
    if (hs) return hamiltonian_field(*hs, y);
    Vector f = vf->F(y);
    require_finite(f, "vector field");
    return f;
  }
  Matrix J(const Vector& y) const {
    if (hs) return hamiltonian_jacobian(*hs, y);
    if (!vf->jacobian) throw Error(ErrorKind::Config, "vector field has no Jacobian");
    Matrix j = vf->jacobian(y);
    require_finite(j, "Jacobian");
    return j;
  }
  std::size_t dim() const { return hs ? hs->dim() : vf->dim; }
};

Vector add_scaled(Vector a, double s, const Vector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

// Exponential Euler, written so that the term multiplied by phi1 is the
// smaller of F and F - J y. Linear homogeneous fields then reduce to e^{hJ}y
// and equilibria to y itself.
Vector predict(const FieldFns& f, const Vector& y, double h, const SolverConfig& cfg) {
  const Vector F = f.F(y);
  if (cfg.predictor == Predictor::ExponentialEuler) {
    std::optional<Matrix> J;
    try {
      J = f.J(y);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DomainViolation) throw;
    }
    if (J) {
      const ExpPhi1 ep = expm_phi1(h * *J);
      Vector c = F - *J * y;
      if (c.norm_inf() < F.norm_inf()) return ep.exp * y + h * (ep.phi1 * c);
      return y + h * (ep.phi1 * F);
    }
  }
  return add_scaled(y, h, F);
}

Vector midpoint_of(const Vector& a, const Vector& b) {
  Vector m(a.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (a[i] + b[i]);
  return m;
}

double scalar_even(double x, EvenKind kind) {
  Matrix m(1);
  m(0, 0) = x;
  return even_fn_of_square(m, kind)(0, 0);
}

void check_h(double h) {
  if (!std::isfinite(h) || h == 0.0) throw Error(ErrorKind::Config, "time step must be finite and nonzero");
}

void guard(double h, double rho) {
  if (std::abs(h) * rho >= kStepGuard) {
    throw Error(ErrorKind::ArgumentTooLarge, "h * rho(F') = " + std::to_string(std::abs(h) * rho) +
                                                 " exceeds the step restriction");
  }
}

// Generic driver for implicit schemes whose coefficient is a function of the
// reference point. Coef: Vector -> C, Res: (Vector, const C&) -> Vector.
template <class C, class CoefFn, class ResFn, class ArgFn>
StepReport implicit_step(const RefPolicy& policy, const Vector& y, const Vector& guess, CoefFn coef, ResFn res,
                         ArgFn arg, const SolverConfig& cfg) {
  SolveResult sol;
  StepReport rep;
  if (!policy.depends_on_next()) {
    const C c = coef(resolve_reference(policy, y, y));
    sol = solve_implicit([&](const Vector& z) { return res(z, c); }, guess, cfg);
    rep.theta_spectral_arg = arg(c);
  } else {
    // The last coefficient is kept, so the accepted iterate does not pay for
    // it twice. Jacobian columns hold the coefficient at the base point.
    Vector last_ref;
    std::optional<C> last;
    auto coef_at = [&](const Vector& z) -> const C& {
      Vector ref = resolve_reference(policy, y, z);
      if (!last || !(ref == last_ref)) {
        last.reset();
        last.emplace(coef(ref));
        last_ref = std::move(ref);
      }
      return *last;
    };
    sol = solve_implicit([&](const Vector& z) { return res(z, coef_at(z)); }, guess, cfg,
                         [&](const Vector& z, const Vector& r) {
                           const C c = coef_at(z);
                           return fd_jacobian([&](const Vector& w) { return res(w, c); }, z, r);
                         });
    rep.theta_spectral_arg = arg(coef_at(sol.y));
  }
  rep.y_next = std::move(sol.y);
  rep.iterations = sol.iterations;
  rep.residual = sol.residual;
  return rep;
}

// ---------------------------------------------------------------- Psi class

struct PsiCoef {
  Matrix delta;
  double arg = 0.0;
};

PsiCoef psi_coef(Rule rule, bool le, const FieldFns& f, const Vector& ybar, double h) {
  const std::size_t d = f.dim();
  if (!le) return {h * Matrix::identity(d), 0.0};
  const Matrix J = f.J(ybar);
  PsiCoef c{psi_delta(rule, le, J, h), 0.0};
  if (rule == Rule::ImplicitMidpoint || rule == Rule::Trapezoidal) c.arg = 0.5 * std::abs(h) * spectral_bound(J);
  return c;
}

Vector psi_impl(Rule rule, const FieldFns& f, const Vector& x, const Vector& z) {
  switch (rule) {
    case Rule::ExplicitEuler:
    case Rule::ExponentialEuler: return f.F(x);
    case Rule::ImplicitEuler: return f.F(z);
    case Rule::ImplicitMidpoint: return f.F(midpoint_of(x, z));
    case Rule::Trapezoidal: {
      Vector a = f.F(x);
      Vector b = f.F(z);
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = 0.5 * (a[i] + b[i]);
      return a;
    }
    default: break;
  }
  throw Error(ErrorKind::Config, std::string("rule ") + to_string(rule) + " is not a Psi-class rule");
}

Vector psi_residual(Rule rule, const FieldFns& f, const Vector& y, const Vector& z, const Matrix& delta) {
  Vector r = z - y;
  r -= delta * psi_impl(rule, f, y, z);
  return r;
}

StepReport step_psi(const Scheme& s, const FieldFns& f, const Vector& y, double h, const SolverConfig& cfg) {
  const Rule rule = s.rule;
  const bool explicit_form =
      !is_implicit(rule) && (!s.locally_exact || !s.policy.depends_on_next());
  if (explicit_form) {
    const Vector ybar = resolve_reference(s.policy, y, y);
    StepReport rep;
    if (rule == Rule::ExponentialEuler || s.locally_exact) {
      // Same cancellation-aware form as the predictor.
      const Vector F = f.F(y);
      const Matrix J = f.J(ybar);
      const ExpPhi1 ep = expm_phi1(h * J);
      if (s.policy.tag == RefPolicy::Tag::Current) {
        Vector c = F - J * y;
        rep.y_next = c.norm_inf() < F.norm_inf() ? ep.exp * y + h * (ep.phi1 * c) : y + h * (ep.phi1 * F);
      } else {
        rep.y_next = y + h * (ep.phi1 * F);
      }
    } else {
      rep.y_next = add_scaled(y, h, f.F(y));
    }
    require_finite(rep.y_next, "step result");
    return rep;
  }
  const Vector guess = predict(f, y, h, cfg);
  return implicit_step<PsiCoef>(
      s.policy, y, guess, [&](const Vector& ybar) { return psi_coef(rule, s.locally_exact, f, ybar, h); },
      [&](const Vector& z, const PsiCoef& c) { return psi_residual(rule, f, y, z, c.delta); },
      [](const PsiCoef& c) { return c.arg; }, cfg);
}

// ------------------------------------------------------- discrete gradients

struct GrCoef {
  Matrix theta;
  double arg = 0.0;
};

GradientVariant variant_of(Rule rule) {
  switch (rule) {
    case Rule::GR1D_Increment:
    case Rule::GRmulti_Increment: return GradientVariant::Increment;
    case Rule::GRmulti_Separable: return GradientVariant::Separable;
    default: return GradientVariant::Symmetric;
  }
}

void require_separable(const HamiltonianSystem& sys) {
  if (!sys.separable) {
    throw Error(ErrorKind::DomainViolation, sys.name + " is not separable; the separable scheme needs H_xp = 0");
  }
}

GrCoef gr_multi_coef(const HamiltonianSystem& sys, GradientVariant v, bool le, const Vector& ybar, double h) {
  const std::size_t d = sys.dim();
  if (!le) return {h * Matrix::identity(d), 0.0};
  const HessianBlocks hb = sys.hessian(ybar);
  const Matrix Fp = hamiltonian_jacobian(hb);
  require_finite(Fp, "Jacobian");
  const double rho = spectral_bound(Fp, 0.5 * kStepGuard / std::abs(h));
  guard(h, rho);
  GrCoef c;
  c.arg = 0.5 * std::abs(h) * rho;
  switch (v) {
    case GradientVariant::Symmetric: c.theta = theta_symmetric(Fp, h); break;
    case GradientVariant::Increment:
      c.theta = theta_increment(Fp, Matrix::from_blocks(hb.xx, hb.xp, hb.xp.transpose(), hb.pp), h);
      break;
    case GradientVariant::Separable: {
      const Matrix delta = delta_separable(hb.pp * hb.xx, h);
      c.theta = Matrix(d);
      c.theta.set_block(0, 0, delta);
      c.theta.set_block(sys.m, sys.m, delta.transpose());
      break;
    }
  }
  return c;
}

Vector apply_s(const Vector& g, std::size_t m) {
  Vector s(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = g[m + i];
    s[m + i] = -g[i];
  }
  return s;
}

Vector gr_multi_residual(const HamiltonianSystem& sys, GradientVariant v, const Vector& y, const Vector& z,
                         const Matrix& theta) {
  const Vector g = v == GradientVariant::Increment ? increment_gradient(sys, y, z) : symmetric_gradient(sys, y, z);
  Vector r = z - y;
  r -= theta * apply_s(g, sys.m);
  return r;
}

struct Gr1dCoef {
  double delta = 0.0;
  double arg = 0.0;
};

Gr1dCoef gr1d_coef(const HamiltonianSystem& sys, GradientVariant v, bool le, const Vector& ybar, double h) {
  if (!le) return {h, 0.0};
  const HessianBlocks hb = sys.hessian(ybar);
  const double hxx = hb.xx(0, 0), hxp = hb.xp(0, 0), hpp = hb.pp(0, 0);
  const double w2 = hxx * hpp - hxp * hxp;
  if (!std::isfinite(w2)) throw Error(ErrorKind::NonFinite, "non-finite Hessian at the reference point");
  if (w2 > 0.0) guard(h, std::sqrt(w2));
  Gr1dCoef c;
  c.arg = 0.5 * std::abs(h) * std::sqrt(std::abs(w2));
  c.delta = v == GradientVariant::Increment ? delta_1d_increment(hxx, hxp, hpp, h)
                                            : delta_1d_symmetric(hxx, hxp, hpp, h);
  return c;
}

Vector gr1d_residual(const HamiltonianSystem& sys, GradientVariant v, const Vector& y, const Vector& z,
                     double delta) {
  const double x0 = y[0], p0 = y[1], x1 = z[0], p1 = z[1];
  const Vector y10{x1, p0};
  const double h00 = sys.H(y), h11 = sys.H(z), h10 = sys.H(y10);
  double qx, qp;
  if (v == GradientVariant::Increment) {
    qx = increment_quotient(sys, y, 0, x1, h00, h10);
    qp = increment_quotient(sys, y10, 1, p1, h10, h11);
  } else {
    // Four-point quotients, each split into the two one-coordinate differences.
    const Vector y01{x0, p1};
    const double h01 = sys.H(y01);
    qx = 0.5 * (increment_quotient(sys, y, 0, x1, h00, h10) + increment_quotient(sys, z, 0, x0, h11, h01));
    qp = 0.5 * (increment_quotient(sys, y10, 1, p1, h10, h11) + increment_quotient(sys, y01, 1, p0, h01, h00));
  }
  return Vector{(x1 - x0) - delta * qp, (p1 - p0) + delta * qx};
}

void debug_energy_check([[maybe_unused]] const HamiltonianSystem& sys, [[maybe_unused]] const Vector& y,
                        [[maybe_unused]] const Vector& z, [[maybe_unused]] const SolverConfig& cfg) {
#ifndef NDEBUG
  const double h0 = sys.H(y);
  const double h1 = sys.H(z);
  double gnorm = 0.0;
  for (double g : gradient(sys, z)) gnorm += std::abs(g);
  assert(std::abs(h1 - h0) <= 10.0 * cfg.tol * (1.0 + std::abs(h0)) * std::max(1.0, gnorm) &&
         "discrete-gradient step lost energy beyond the solver tolerance");
#endif
}

FieldFns ham_fns(const HamiltonianSystem& sys) {
  FieldFns f;
  f.hs = &sys;
  return f;
}

}  // namespace

// ------------------------------------------------------------ public pieces

Vector psi(Rule rule, const VectorField& field, const Vector& x_n, const Vector& x_np1) {
  FieldFns f;
  f.vf = &field;
  return psi_impl(rule, f, x_n, x_np1);
}

Matrix psi2_bar(Rule rule, const Matrix& Fp) {
  switch (rule) {
    case Rule::ExplicitEuler:
    case Rule::ExponentialEuler: return Matrix(Fp.dim());
    case Rule::ImplicitEuler: return Fp;
    case Rule::ImplicitMidpoint:
    case Rule::Trapezoidal: return 0.5 * Fp;
    default: break;
  }
  throw Error(ErrorKind::Config, std::string("rule ") + to_string(rule) + " is not a Psi-class rule");
}

Matrix delta_general(const Matrix& psi2, const Matrix& Fp, double h) {
  require_dim(psi2.dim(), Fp.dim(), "Psi2");
  Matrix em1 = expm(h * Fp);
  em1.add_identity(-1.0);
  const Matrix bracket = Fp + psi2 * em1;
  // delta * bracket = em1  <=>  bracket^T delta^T = em1^T
  return solve(bracket.transpose(), em1.transpose()).transpose();
}

Matrix psi_delta(Rule rule, bool locally_exact, const Matrix& Fp, double h) {
  if (!locally_exact) return h * Matrix::identity(Fp.dim());
  switch (rule) {
    case Rule::ExplicitEuler:
    case Rule::ExponentialEuler: return h * phi1(h * Fp);
    case Rule::ImplicitEuler: return h * phi1(-h * Fp);
    case Rule::ImplicitMidpoint:
    case Rule::Trapezoidal: return h * even_fn((0.5 * h) * Fp, EvenKind::Tanhc);
    default: break;
  }
  throw Error(ErrorKind::Config, std::string("rule ") + to_string(rule) + " is not a Psi-class rule");
}

Matrix theta_symmetric(const Matrix& Fp, double h) { return h * even_fn((0.5 * h) * Fp, EvenKind::Tanhc); }

Matrix theta_increment(const Matrix& Fp, const Matrix& hessian, double h) {
  const std::size_t m = Fp.dim() / 2;
  Matrix k = even_fn((0.5 * h) * Fp, EvenKind::Xcothx);
  k += (0.5 * h) * (canonical_structure(m) * linearization_matrices(hessian).R);
  return solve(k, h * Matrix::identity(Fp.dim()));
}

Matrix delta_separable(const Matrix& omega2, double h) {
  return h * even_fn_of_square((0.25 * h * h) * omega2, EvenKind::Tanc);
}

double theta_form_defect(const Matrix& theta) {
  const std::size_t m = theta.dim() / 2;
  const Matrix s = canonical_structure(m);
  // S^{-1} = -S
  const Matrix rhs = -(s * (theta * s));
  return max_abs_diff(theta.transpose(), rhs);
}

void check_theta_form(const Matrix& theta) {
  const double defect = theta_form_defect(theta);
  if (!(defect <= 1e-10 * std::max(1.0, theta.max_abs()))) {
    throw Error(ErrorKind::ThetaFormViolation, "theta^T differs from S^-1 theta S by " + std::to_string(defect));
  }
}

double delta_1d_symmetric(double hxx, double hxp, double hpp, double h) {
  const double w2 = hxx * hpp - hxp * hxp;
  const double x = 0.25 * h * h * w2;
  return w2 > 0.0 ? h * scalar_even(x, EvenKind::Tanc) : h * scalar_even(-x, EvenKind::Tanhc);
}

double delta_1d_increment(double hxx, double hxp, double hpp, double h) {
  const double w2 = hxx * hpp - hxp * hxp;
  const double g = scalar_even(-0.25 * h * h * w2, EvenKind::Xcothx);
  const double denom = g + 0.5 * h * hxp;
  if (denom == 0.0) throw Error(ErrorKind::SingularMatrix, "increment coefficient has a zero denominator");
  return h / denom;
}

StepReport step_gr_1d(const HamiltonianSystem& sys, GradientVariant variant, bool locally_exact,
                      const RefPolicy& policy, const Vector& y, double h, const SolverConfig& cfg) {
  if (sys.m != 1) throw Error(ErrorKind::DimensionMismatch, "one-dimensional scheme on a system with m != 1");
  if (variant == GradientVariant::Separable) {
    throw Error(ErrorKind::Config, "the one-dimensional schemes are symmetric or increment");
  }
  require_dim(y.size(), 2, "state");
  require_finite(y, "state");
  check_h(h);
  validate(cfg);
  const Vector guess = predict(ham_fns(sys), y, h, cfg);
  StepReport rep = implicit_step<Gr1dCoef>(
      policy, y, guess, [&](const Vector& ybar) { return gr1d_coef(sys, variant, locally_exact, ybar, h); },
      [&](const Vector& z, const Gr1dCoef& c) { return gr1d_residual(sys, variant, y, z, c.delta); },
      [](const Gr1dCoef& c) { return c.arg; }, cfg);
  debug_energy_check(sys, y, rep.y_next, cfg);
  return rep;
}

StepReport step_gr_multi(const HamiltonianSystem& sys, GradientVariant variant, bool locally_exact,
                         const RefPolicy& policy, const Vector& y, double h, const SolverConfig& cfg) {
  require_dim(y.size(), sys.dim(), "state");
  require_finite(y, "state");
  check_h(h);
  validate(cfg);
  if (variant == GradientVariant::Separable) require_separable(sys);
  const Vector guess = predict(ham_fns(sys), y, h, cfg);
  Matrix last_theta;
  StepReport rep = implicit_step<GrCoef>(
      policy, y, guess,
      [&](const Vector& ybar) { return gr_multi_coef(sys, variant, locally_exact, ybar, h); },
      [&](const Vector& z, const GrCoef& c) { return gr_multi_residual(sys, variant, y, z, c.theta); },
      [&](const GrCoef& c) {
        last_theta = c.theta;
        return c.arg;
      },
      cfg);
  if (locally_exact) check_theta_form(last_theta);
  debug_energy_check(sys, y, rep.y_next, cfg);
  return rep;
}

StepReport step(const Scheme& scheme, const VectorField& field, const Vector& y, double h,
                const SolverConfig& cfg) {
  if (is_discrete_gradient(scheme.rule)) {
    throw Error(ErrorKind::Config, std::string(to_string(scheme.rule)) + " needs a Hamiltonian system");
  }
  require_dim(y.size(), field.dim, "state");
  require_finite(y, "state");
  check_h(h);
  validate(cfg);
  validate(scheme, field.dim);
  FieldFns f;
  f.vf = &field;
  return step_psi(scheme, f, y, h, cfg);
}

StepReport step(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y, double h,
                const SolverConfig& cfg) {
  validate(scheme, sys.dim());
  switch (scheme.rule) {
    case Rule::GR1D_Symmetric:
    case Rule::GR1D_Increment:
      return step_gr_1d(sys, variant_of(scheme.rule), scheme.locally_exact, scheme.policy, y, h, cfg);
    case Rule::GRmulti_Symmetric:
    case Rule::GRmulti_Increment:
    case Rule::GRmulti_Separable:
      return step_gr_multi(sys, variant_of(scheme.rule), scheme.locally_exact, scheme.policy, y, h, cfg);
    default: break;
  }
  require_dim(y.size(), sys.dim(), "state");
  require_finite(y, "state");
  check_h(h);
  validate(cfg);
  return step_psi(scheme, ham_fns(sys), y, h, cfg);
}

Vector scheme_residual(const Scheme& scheme, const VectorField& field, const Vector& y_n, const Vector& y_np1,
                       const Vector& y_bar, double h) {
  if (is_discrete_gradient(scheme.rule)) {
    throw Error(ErrorKind::Config, std::string(to_string(scheme.rule)) + " needs a Hamiltonian system");
  }
  FieldFns f;
  f.vf = &field;
  const PsiCoef c = psi_coef(scheme.rule, scheme.locally_exact, f, y_bar, h);
  return psi_residual(scheme.rule, f, y_n, y_np1, c.delta);
}

Vector scheme_residual(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y_n, const Vector& y_np1,
                       const Vector& y_bar, double h) {
  const GradientVariant v = variant_of(scheme.rule);
  switch (scheme.rule) {
    case Rule::GR1D_Symmetric:
    case Rule::GR1D_Increment: {
      if (sys.m != 1) throw Error(ErrorKind::DimensionMismatch, "one-dimensional scheme on a system with m != 1");
      const Gr1dCoef c = gr1d_coef(sys, v, scheme.locally_exact, y_bar, h);
      return gr1d_residual(sys, v, y_n, y_np1, c.delta);
    }
    case Rule::GRmulti_Symmetric:
    case Rule::GRmulti_Increment:
    case Rule::GRmulti_Separable: {
      if (v == GradientVariant::Separable) require_separable(sys);
      const GrCoef c = gr_multi_coef(sys, v, scheme.locally_exact, y_bar, h);
      return gr_multi_residual(sys, v, y_n, y_np1, c.theta);
    }
    default: break;
  }
  const FieldFns f = ham_fns(sys);
  const PsiCoef c = psi_coef(scheme.rule, scheme.locally_exact, f, y_bar, h);
  return psi_residual(scheme.rule, f, y_n, y_np1, c.delta);
}

// ---------------------------------------------------------------- integrate

namespace {

std::string step_message(std::size_t index, const Error& cause) {
  return "step " + std::to_string(index) + ": " + cause.what();
}

void check_schedule(const std::vector<double>& schedule) {
  if (schedule.empty()) throw Error(ErrorKind::Config, "empty step schedule");
  for (double h : schedule) check_h(h);
}

template <class StepFn, class EnergyFn>
Trajectory run(const Vector& y0, const std::vector<double>& schedule, StepFn do_step, EnergyFn energy_of,
               bool with_energy, const StepObserver& observer) {
  check_schedule(schedule);
  Trajectory traj;
  traj.times.reserve(schedule.size() + 1);
  traj.states.reserve(schedule.size() + 1);
  traj.reports.reserve(schedule.size());
  traj.times.push_back(0.0);
  traj.states.push_back(y0);
  if (with_energy) {
    traj.energies.reserve(schedule.size() + 1);
    traj.energies.push_back(energy_of(y0));
  }
  double t = 0.0;
  for (std::size_t n = 0; n < schedule.size(); ++n) {
    StepReport rep;
    try {
      rep = do_step(traj.states.back(), schedule[n]);
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError(n + 1, e);
    }
    t += schedule[n];
    traj.times.push_back(t);
    traj.states.push_back(rep.y_next);
    if (with_energy) traj.energies.push_back(energy_of(rep.y_next));
    if (observer) observer(n + 1, t, rep.y_next, rep);
    traj.reports.push_back(std::move(rep));
  }
  return traj;
}

}  // namespace

StepError::StepError(std::size_t index, const Error& cause)
    : Error(cause.kind(), step_message(index, cause)), index_(index) {
  if (const auto* nc = dynamic_cast<const NoConvergence*>(&cause)) {
    iterations_ = nc->iterations();
    residual_ = nc->residual();
  }
}

Trajectory integrate(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y0,
                     const std::vector<double>& schedule, const SolverConfig& cfg, const StepObserver& observer) {
  require_dim(y0.size(), sys.dim(), "initial state");
  require_finite(y0, "initial state");
  validate(scheme, sys.dim());
  validate(cfg);
  return run(
      y0, schedule, [&](const Vector& y, double h) { return step(scheme, sys, y, h, cfg); },
      [&](const Vector& y) { return sys.H(y); }, true, observer);
}

Trajectory integrate(const Scheme& scheme, const VectorField& field, const Vector& y0,
                     const std::vector<double>& schedule, const SolverConfig& cfg, const StepObserver& observer) {
  require_dim(y0.size(), field.dim, "initial state");
  require_finite(y0, "initial state");
  validate(scheme, field.dim);
  validate(cfg);
  return run(
      y0, schedule, [&](const Vector& y, double h) { return step(scheme, field, y, h, cfg); },
      [](const Vector&) { return 0.0; }, false, observer);
}

}  // namespace geodint
