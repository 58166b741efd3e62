#include "geodint/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "geodint/disgrad.hpp"
#include "geodint/error.hpp"
#include "geodint/exact_linear.hpp"
#include "geodint/integrators.hpp"
#include "geodint/matfun.hpp"
#include "geodint/oracle.hpp"
#include "geodint/registry.hpp"

namespace geodint::verify {

bool SuiteReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"linear",           "local-exactness", "theta-form",
                                              "gradient-identity", "reversibility",   "fixed-points"};
  return names;
}

SuiteReport run_suite(std::string_view suite, std::uint64_t seed) {
  if (suite == "linear") return linear(seed);
  if (suite == "local-exactness") return local_exactness(seed);
  if (suite == "theta-form") return theta_form(seed);
  if (suite == "gradient-identity") return gradient_identity(seed);
  if (suite == "reversibility") return reversibility(seed);
  if (suite == "fixed-points") return fixed_points(seed);
  throw Error(ErrorKind::Config, "unknown suite: " + std::string(suite));
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
  }
  Vector vector(std::size_t n, double lo, double hi) {
    Vector v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  Matrix matrix(std::size_t n, double lo, double hi) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }
  Matrix symmetric(std::size_t n) {
    const Matrix b = matrix(n, -1.0, 1.0);
    Matrix s = b + b.transpose();
    s *= 0.5;
    return s;
  }
  Matrix spd(std::size_t n) {
    const Matrix b = matrix(n, -1.0, 1.0);
    Matrix s = b.transpose() * b;
    s.add_identity(0.1);
    return s;
  }

 private:
  std::mt19937_64 gen_;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Worst-case accumulator for a named check.
struct Tally {
  Tally(std::string n, double l) : name(std::move(n)), limit(l) {}

  std::string name;
  double limit;
  double worst = 0.0;
  std::string where;
  std::string failure;

  void add(double value, const std::string& at) {
    if (!(value <= worst) || std::isnan(value)) {
      worst = value;
      where = at;
    }
  }
  void fail(const std::string& at, const std::string& why) {
    if (failure.empty()) failure = at + ": " + why;
  }
  // Lower bound check: the quantity must exceed the limit everywhere.
  Check finish_above() const {
    Check c{name, failure.empty() && best_low > limit, best_low, limit, ""};
    c.detail = failure.empty() ? "smallest " + fmt("%.3e", best_low) + " at " + low_where : failure;
    return c;
  }
  void add_low(double value, const std::string& at) {
    if (!(value >= best_low) || std::isnan(value)) {
      best_low = value;
      low_where = at;
    }
  }
  double best_low = INFINITY;
  std::string low_where;

  Check finish() const {
    Check c{name, failure.empty() && worst <= limit, worst, limit, ""};
    c.detail = failure.empty() ? "worst " + fmt("%.3e", worst) + (where.empty() ? "" : " at " + where) : failure;
    return c;
  }
};

double rel_err(const Vector& a, const Vector& b) {
  return max_abs_diff(a, b) / std::max(1.0, b.norm_inf());
}

std::string scheme_label(const Scheme& s) {
  std::string l = to_string(s.rule);
  if (!s.locally_exact) return l + "/classical";
  if (s.rule == Rule::ExponentialEuler) return l;
  return l + "/le/" + to_string(s.policy.tag);
}

std::vector<RefPolicy> policies(const Vector& fixed_point) {
  return {RefPolicy::current(), RefPolicy::next(), RefPolicy::midpoint(), RefPolicy::fixed(fixed_point)};
}

// Every locally exact scheme with every reference policy that applies.
std::vector<Scheme> le_schemes(Rule rule, const Vector& fixed_point) {
  if (rule == Rule::ExponentialEuler) return {Scheme{rule, RefPolicy::current(), true}};
  std::vector<Scheme> out;
  for (RefPolicy& p : policies(fixed_point)) out.push_back(Scheme{rule, std::move(p), true});
  return out;
}

Matrix scaled_to(Matrix m, double norm) {
  const double n = std::max(m.norm1(), m.norm_inf());
  if (n > 0.0) m *= norm / n;
  return m;
}

const Vector& pendulum_probe_point() {
  static const Vector v{0.3, 0.2};
  return v;
}

const Vector& henon_heiles_probe_point() {
  static const Vector v{0.1, -0.1, 0.2, 0.1};
  return v;
}

Vector random_state(Rng& rng, const HamiltonianSystem& sys) {
  if (sys.name == "kepler") {
    const double r = rng.uniform(0.5, 2.0), phi = rng.uniform(0.0, 6.283185307179586);
    return Vector{r * std::cos(phi), r * std::sin(phi), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  }
  if (sys.name == "henon-heiles") return rng.vector(sys.dim(), -0.4, 0.4);
  return rng.vector(sys.dim(), -1.0, 1.0);
}

}  // namespace

// ------------------------------------------------------------------ linear

SuiteReport linear(std::uint64_t seed) {
  SuiteReport rep{"linear", seed, {}};
  Rng rng(seed);
  constexpr int kSystems = 20;
  constexpr int kSteps = 100;
  constexpr double kTol = 1e-10;
  std::vector<Tally> tallies;
  auto tally = [&](const std::string& name) -> Tally& {
    for (Tally& t : tallies)
      if (t.name == name) return t;
    tallies.emplace_back(name, kTol);
    return tallies.back();
  };

  for (int k = 0; k < kSystems; ++k) {
    const std::string at = "system " + std::to_string(k);
    const double h = rng.uniform(0.05, 0.5);
    const std::vector<double> schedule(kSteps, h);

    // General affine field: a rotation part, a damping part and a small shift,
    // so the flow neither explodes nor dies over 100 steps.
    const std::size_t d = rng.index(1, 6);
    const Matrix b = rng.matrix(d, -1.0, 1.0);
    Matrix a = b - b.transpose();
    a -= 0.3 * rng.spd(d);
    a.add_identity(rng.uniform(0.0, 0.01));
    a = scaled_to(a, rng.uniform(0.5, 2.0));
    const LinearSystem ls(a, rng.vector(d, -1.0, 1.0));
    const VectorField field = linear_field(ls);
    const Vector x0 = rng.vector(d, -1.0, 1.0);
    const Vector exact = exact_step_linear(ls, x0, kSteps * h);
    const Vector anchor = rng.vector(d, -1.0, 1.0);
    for (Rule rule : {Rule::ExplicitEuler, Rule::ImplicitEuler, Rule::ImplicitMidpoint, Rule::Trapezoidal,
                      Rule::ExponentialEuler}) {
      for (const Scheme& s : le_schemes(rule, anchor)) {
        Tally& t = tally(scheme_label(s));
        try {
          const Trajectory tr = integrate(s, field, x0, schedule);
          t.add(rel_err(tr.states.back(), exact), at);
        } catch (const Error& e) {
          t.fail(at, e.what());
        }
      }
    }

    // Quadratic Hamiltonian with a positive definite Hessian.
    const std::size_t m = rng.index(1, 3);
    Matrix K;
    if (rng.uniform(0.0, 1.0) < 0.5) {
      K = Matrix(2 * m);
      K.set_block(0, 0, rng.spd(m));
      K.set_block(m, m, rng.spd(m));
    } else {
      K = rng.spd(2 * m);
    }
    K = scaled_to(K, rng.uniform(0.5, 2.0));
    const HamiltonianSystem sys = make_quadratic(K, rng.vector(2 * m, -1.0, 1.0));
    const Vector y0 = rng.vector(2 * m, -1.0, 1.0);
    const Vector exact_h = exact_step_linear(*sys.linear, y0, kSteps * h);
    const Vector anchor_h = rng.vector(2 * m, -1.0, 1.0);
    for (Rule rule : {Rule::GR1D_Symmetric, Rule::GR1D_Increment, Rule::GRmulti_Symmetric, Rule::GRmulti_Increment,
                      Rule::GRmulti_Separable}) {
      if (!applicable(rule, sys)) continue;
      for (const Scheme& s : le_schemes(rule, anchor_h)) {
        Tally& t = tally(scheme_label(s));
        try {
          const Trajectory tr = integrate(s, sys, y0, schedule);
          t.add(rel_err(tr.states.back(), exact_h), at);
        } catch (const Error& e) {
          t.fail(at, e.what());
        }
      }
    }
  }
  for (const Tally& t : tallies) rep.checks.push_back(t.finish());
  return rep;
}

// --------------------------------------------------------- local exactness

SuiteReport local_exactness(std::uint64_t seed) {
  SuiteReport rep{"local-exactness", seed, {}};
  Rng rng(seed);
  constexpr double h = 0.3;
  constexpr double kExact = 1e-6;
  constexpr double kGap = 1e-3;

  for (const char* name : {"pendulum", "henon-heiles"}) {
    const Problem prob = make_problem(name);
    const HamiltonianSystem& sys = prob.system;
    std::vector<Vector> points{sys.m == 1 ? pendulum_probe_point() : henon_heiles_probe_point()};
    for (int k = 0; k < 5; ++k) points.push_back(random_state(rng, sys));

    for (Rule rule : all_rules()) {
      if (!applicable(rule, sys)) continue;
      Tally le{std::string(name) + "/" + to_string(rule) + "/le", kExact};
      for (const Vector& p : points) {
        try {
          le.add(local_exactness_probe(Scheme{rule, default_policy(rule), true}, sys, p, h), "");
        } catch (const Error& e) {
          le.fail("probe", e.what());
        }
      }
      rep.checks.push_back(le.finish());
      if (rule == Rule::ExponentialEuler) continue;

      // The classical form must be visibly different at the fixed probe point.
      Tally gap{std::string(name) + "/" + to_string(rule) + "/classical gap", kGap};
      try {
        gap.add_low(local_exactness_probe(Scheme{rule, default_policy(rule), false}, sys, points.front(), h),
                    "the fixed probe point");
      } catch (const Error& e) {
        gap.fail("probe", e.what());
      }
      rep.checks.push_back(gap.finish_above());
    }
  }
  return rep;
}

// -------------------------------------------------------------- theta form

SuiteReport theta_form(std::uint64_t seed) {
  SuiteReport rep{"theta-form", seed, {}};
  Rng rng(seed);
  constexpr int kCases = 50;
  Tally sym{"theta symmetric", 1e-10}, inc{"theta increment", 1e-10}, sep{"theta separable", 1e-10};
  for (int k = 0; k < kCases; ++k) {
    const std::string at = "case " + std::to_string(k);
    const std::size_t m = rng.index(1, 3);
    const double h = rng.uniform(0.01, 0.5);
    // Scale so h rho(F') stays well inside the step restriction.
    const Matrix hess = scaled_to(rng.symmetric(2 * m), rng.uniform(0.1, 2.5 / h));
    const Matrix Fp = canonical_structure(m) * hess;
    try {
      const Matrix t1 = theta_symmetric(Fp, h);
      sym.add(theta_form_defect(t1) / std::max(1.0, t1.max_abs()), at);
      const Matrix t2 = theta_increment(Fp, hess, h);
      inc.add(theta_form_defect(t2) / std::max(1.0, t2.max_abs()), at);
    } catch (const Error& e) {
      sym.fail(at, e.what());
    }
    const Matrix v = rng.symmetric(m), tp = rng.spd(m);
    const Matrix omega2 = scaled_to(tp * v, rng.uniform(0.1, 2.0 / (h * h)));
    try {
      const Matrix d = delta_separable(omega2, h);
      Matrix t3(2 * m);
      t3.set_block(0, 0, d);
      t3.set_block(m, m, d.transpose());
      sep.add(theta_form_defect(t3) / std::max(1.0, t3.max_abs()), at);
    } catch (const Error& e) {
      sep.fail(at, e.what());
    }
  }
  rep.checks = {sym.finish(), inc.finish(), sep.finish()};
  return rep;
}

// ------------------------------------------------------- gradient identity

SuiteReport gradient_identity(std::uint64_t seed) {
  SuiteReport rep{"gradient-identity", seed, {}};
  Rng rng(seed);
  constexpr int kPairs = 1000;

  for (const std::string& name : problem_names()) {
    const Problem prob = make_problem(name);
    const HamiltonianSystem& sys = prob.system;
    Tally sym{name + "/symmetric <g,dy> = dH", 1e-12}, inc{name + "/increment <g,dy> = dH", 1e-12};
    Tally lim{name + "/consistency g(y,y) = grad H", 1e-14};
    for (int k = 0; k < kPairs; ++k) {
      const Vector y = random_state(rng, sys);
      // Mix of ordinary, tiny and partly zero increments.
      Vector dy = rng.vector(sys.dim(), -0.3, 0.3);
      const int kind = k % 4;
      if (kind == 1) dy *= 1e-7;
      if (kind == 2) dy[rng.index(0, sys.dim() - 1)] = 0.0;
      Vector z = y + dy;
      if (sys.name == "kepler" && std::hypot(z[0], z[1]) < 0.2) z = y;
      const std::string at = "pair " + std::to_string(k);
      try {
        const double dH = sys.H(z) - sys.H(y);
        const Vector diff = z - y;
        sym.add(std::abs(dot(symmetric_gradient(sys, y, z), diff) - dH), at);
        inc.add(std::abs(dot(increment_gradient(sys, y, z), diff) - dH), at);
        const Vector g = gradient(sys, y);
        lim.add(std::max(max_abs_diff(symmetric_gradient(sys, y, y), g), max_abs_diff(increment_gradient(sys, y, y), g)) /
                    std::max(1.0, g.norm_inf()),
                at);
      } catch (const Error& e) {
        sym.fail(at, e.what());
      }
    }
    rep.checks.push_back(sym.finish());
    rep.checks.push_back(inc.finish());
    rep.checks.push_back(lim.finish());
  }

  Tally split{"A + B = Hessian", 1e-13}, anti{"R antisymmetric", 1e-13};
  Tally recip{"tanhc(M) xcothx(M) = I", 1e-12};
  for (int k = 0; k < 50; ++k) {
    const std::size_t m = rng.index(1, 3);
    const Matrix hess = scaled_to(rng.symmetric(2 * m), rng.uniform(0.1, 5.0));
    const LinearizationTriple t = linearization_matrices(hess);
    split.add(max_abs_diff(t.A + t.B, hess), "");
    anti.add(max_abs_diff(t.R, -t.R.transpose()), "");

    const Matrix M = scaled_to(rng.matrix(2 * m, -1.0, 1.0), rng.uniform(0.05, 1.2));
    Matrix prod = even_fn(M, EvenKind::Tanhc) * even_fn(M, EvenKind::Xcothx);
    prod.add_identity(-1.0);
    recip.add(prod.max_abs(), "");
  }
  rep.checks.push_back(split.finish());
  rep.checks.push_back(anti.finish());
  rep.checks.push_back(recip.finish());
  return rep;
}

// ----------------------------------------------------------- reversibility

SuiteReport reversibility(std::uint64_t seed) {
  SuiteReport rep{"reversibility", seed, {}};
  Rng rng(seed);
  constexpr int kStates = 100;
  constexpr double kTol = 1e-10;

  for (const char* name : {"pendulum", "henon-heiles"}) {
    const Problem prob = make_problem(name);
    const HamiltonianSystem& sys = prob.system;
    std::vector<Scheme> schemes{Scheme{Rule::GRmulti_Symmetric, RefPolicy::midpoint(), true},
                                Scheme{Rule::ImplicitMidpoint, RefPolicy::midpoint(), true}};
    if (sys.m == 1) schemes.insert(schemes.begin(), Scheme{Rule::GR1D_Symmetric, RefPolicy::midpoint(), true});
    for (const Scheme& s : schemes) {
      Tally t{std::string(name) + "/" + scheme_label(s), kTol};
      for (int k = 0; k < kStates; ++k) {
        const Vector y = random_state(rng, sys);
        const double h = rng.uniform(0.05, 0.3);
        try {
          const Vector fwd = step(s, sys, y, h).y_next;
          const Vector back = step(s, sys, fwd, -h).y_next;
          t.add(rel_err(back, y), "state " + std::to_string(k));
        } catch (const Error& e) {
          t.fail("state " + std::to_string(k), e.what());
        }
      }
      rep.checks.push_back(t.finish());
    }
  }
  return rep;
}

// ------------------------------------------------------------ fixed points

SuiteReport fixed_points(std::uint64_t seed) {
  SuiteReport rep{"fixed-points", seed, {}};
  constexpr int kSteps = 1000;
  constexpr double h = 0.5;
  const std::vector<double> schedule(kSteps, h);

  for (const std::string& name : problem_names()) {
    const Problem prob = make_problem(name);
    const HamiltonianSystem& sys = prob.system;
    if (sys.equilibria.empty()) continue;
    for (Rule rule : all_rules()) {
      if (!applicable(rule, sys)) continue;
      for (bool le : {true, false}) {
        if (!le && rule == Rule::ExponentialEuler) continue;
        const Scheme s{rule, default_policy(rule), le};
        Tally t{name + "/" + scheme_label(s), 1e-12};
        for (std::size_t e = 0; e < sys.equilibria.size(); ++e) {
          const Vector& eq = sys.equilibria[e];
          try {
            const Trajectory tr = integrate(s, sys, eq, schedule);
            double worst = 0.0;
            for (const Vector& y : tr.states) worst = std::max(worst, max_abs_diff(y, eq));
            t.add(worst, "equilibrium " + std::to_string(e));
          } catch (const Error& ex) {
            t.fail("equilibrium " + std::to_string(e), ex.what());
          }
        }
        rep.checks.push_back(t.finish());
      }
    }
  }
  return rep;
}

}  // namespace geodint::verify
