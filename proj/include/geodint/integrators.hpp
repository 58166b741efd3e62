#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geodint/error.hpp"
#include "geodint/model.hpp"
#include "geodint/solver.hpp"

namespace geodint {

enum class Rule {
  ExplicitEuler,
  ImplicitEuler,
  ImplicitMidpoint,
  Trapezoidal,
  ExponentialEuler,
  GR1D_Symmetric,
  GR1D_Increment,
  GRmulti_Symmetric,
  GRmulti_Increment,
  GRmulti_Separable,
};

const char* to_string(Rule rule) noexcept;
std::optional<Rule> rule_from_string(std::string_view name) noexcept;
const std::vector<Rule>& all_rules();
bool is_discrete_gradient(Rule rule) noexcept;
// Rules whose update reads y_{n+1} even with a frozen coefficient.
bool is_implicit(Rule rule) noexcept;
// 1-D rules need m = 1 and the separable rule needs H_xp = 0.
bool applicable(Rule rule, const HamiltonianSystem& sys) noexcept;

struct Scheme {
  Rule rule = Rule::ImplicitMidpoint;
  RefPolicy policy;
  bool locally_exact = true;
};

// Reference policy used when the caller does not pick one.
RefPolicy default_policy(Rule rule);
// Enforces the exponential Euler invariant (locally exact, current point) and
// a Fixed point of the right size.
void validate(const Scheme& scheme, std::size_t dim);

struct StepReport {
  Vector y_next;
  int iterations = 0;
  double residual = 0.0;
  // Spectral bound of the argument of tan/tanh/coth (0 when none is used).
  double theta_spectral_arg = 0.0;
};

// Largest allowed h * rho(F') for trigonometric coefficients.
inline constexpr double kStepGuard = 3.141592653589793 - 0.1;

// Increment of the Psi-class one-step rules: x_{n+1} - x_n = delta Psi.
Vector psi(Rule rule, const VectorField& field, const Vector& x_n, const Vector& x_np1);
// Derivative of Psi with respect to x_{n+1} at the diagonal, given F' there.
Matrix psi2_bar(Rule rule, const Matrix& Fp);

// (e^{hF'} - 1)(F' + Psi2 (e^{hF'} - 1))^{-1}
Matrix delta_general(const Matrix& psi2_bar, const Matrix& Fp, double h);
// Same quantity through the closed form of each rule (h phi1(hF'),
// h phi1(-hF') or h tanhc(hF'/2)); baseline rules return h I.
Matrix psi_delta(Rule rule, bool locally_exact, const Matrix& Fp, double h);

// theta = h tanhc(hF'/2) (symmetric) or h (xcothx(hF'/2) + (h/2) S R)^{-1}
// (increment), both from the Hessian at the reference.
Matrix theta_symmetric(const Matrix& Fp, double h);
Matrix theta_increment(const Matrix& Fp, const Matrix& hessian, double h);
// Block delta of the separable form, from Omega^2 = T_pp V_xx.
Matrix delta_separable(const Matrix& omega2, double h);
// Throws ThetaFormViolation unless theta^T = S^{-1} theta S to 1e-10.
void check_theta_form(const Matrix& theta);
double theta_form_defect(const Matrix& theta);

// Scalar 1-D coefficients from H_xx, H_xp, H_pp at the reference.
double delta_1d_symmetric(double hxx, double hxp, double hpp, double h);
double delta_1d_increment(double hxx, double hxp, double hpp, double h);

StepReport step(const Scheme& scheme, const VectorField& field, const Vector& y, double h,
                const SolverConfig& cfg = {});
StepReport step(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y, double h,
                const SolverConfig& cfg = {});

enum class GradientVariant { Symmetric, Increment, Separable };

StepReport step_gr_1d(const HamiltonianSystem& sys, GradientVariant variant, bool locally_exact,
                      const RefPolicy& policy, const Vector& y, double h, const SolverConfig& cfg = {});
StepReport step_gr_multi(const HamiltonianSystem& sys, GradientVariant variant, bool locally_exact,
                         const RefPolicy& policy, const Vector& y, double h, const SolverConfig& cfg = {});

// Left-hand side of the scheme's defining equation, G(y_n, y_{n+1}) = 0, with
// the coefficient matrix evaluated at the given reference point.
Vector scheme_residual(const Scheme& scheme, const VectorField& field, const Vector& y_n, const Vector& y_np1,
                       const Vector& y_bar, double h);
Vector scheme_residual(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y_n, const Vector& y_np1,
                       const Vector& y_bar, double h);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<double> energies;  // empty for plain vector fields
  std::vector<StepReport> reports;
};

// Raised by integrate; kind() is that of the underlying failure.
class StepError : public Error {
 public:
  StepError(std::size_t index, const Error& cause);
  std::size_t index() const noexcept { return index_; }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t index_;
  int iterations_ = 0;
  double residual_ = 0.0;
};

// Called after every accepted step with the step index n (1-based), time and state.
using StepObserver = std::function<void(std::size_t, double, const Vector&, const StepReport&)>;

Trajectory integrate(const Scheme& scheme, const HamiltonianSystem& sys, const Vector& y0,
                     const std::vector<double>& schedule, const SolverConfig& cfg = {},
                     const StepObserver& observer = {});
Trajectory integrate(const Scheme& scheme, const VectorField& field, const Vector& y0,
                     const std::vector<double>& schedule, const SolverConfig& cfg = {},
                     const StepObserver& observer = {});

}  // namespace geodint
