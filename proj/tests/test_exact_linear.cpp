#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geodint/error.hpp"
#include "geodint/exact_linear.hpp"
#include "geodint/matfun.hpp"
#include "support.hpp"

using geodint::HarmonicOscillator;
using geodint::LinearSystem;
using geodint::Matrix;
using geodint::Vector;
using testing_support::Rng;

namespace {

constexpr double pi = std::numbers::pi;

Matrix one(double v) { return Matrix::from_rows({{v}}); }

// Random symmetric positive definite Omega with spectrum in [lo, hi].
Matrix random_frequency(Rng& rng, std::size_t m, double lo, double hi) {
  Matrix s = rng.symmetric(m, 1.0);
  s = s * s;
  s.add_identity(0.2);
  const double scale = std::max(s.norm1(), s.norm_inf());
  Matrix omega = (hi - lo) / scale * s;
  omega.add_identity(lo);
  return omega;
}

}  // namespace

TEST_CASE("exact_step_linear examples") {
  const Vector a = geodint::exact_step_linear(LinearSystem(one(-1), Vector{0}), Vector{1}, std::log(2.0));
  CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-15));

  const Vector r = geodint::exact_step_linear(LinearSystem(Matrix::from_rows({{0, 1}, {-1, 0}}), Vector{0, 0}),
                                              Vector{1, 0}, pi / 2);
  CHECK(std::abs(r[0]) <= 1e-15);
  CHECK(r[1] == doctest::Approx(-1).epsilon(1e-15));

  const Vector c = geodint::exact_step_linear(LinearSystem(one(-1), Vector{1}), Vector{0}, std::log(2.0));
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("LinearSystem checks sizes") {
  CHECK_THROWS_AS(LinearSystem(Matrix::identity(2), Vector{1}), geodint::Error);
}

TEST_CASE("exact_delta examples") {
  Rng rng(1);
  const Matrix a = rng.matrix(3, 2.0);
  CHECK(geodint::exact_delta(LinearSystem(a, Vector(3)), 0.0).max_abs() == 0.0);
  CHECK(geodint::exact_delta(LinearSystem(one(1), Vector{0}), 1.0)(0, 0) ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-15));
  // singular A: Delta = h I + h^2 A / 2 for nilpotent A
  const Matrix n = Matrix::from_rows({{0, 1}, {0, 0}});
  const Matrix d = geodint::exact_delta(LinearSystem(n, Vector(2)), 0.5);
  CHECK(geodint::max_abs_diff(d, Matrix::from_rows({{0.5, 0.125}, {0, 0.5}})) <= 1e-16);
}

TEST_CASE("semigroup and reversibility of the linear flow") {
  Rng rng(41);
  double worst_group = 0.0, worst_back = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = rng.index(1, 6);
    const double h1 = rng.uniform(-1.0, 1.0), h2 = rng.uniform(-1.0, 1.0);
    const Matrix a = rng.matrix_with_norm(d, 5.0 / (std::abs(h1) + std::abs(h2)) * rng.uniform(0.1, 1.0));
    const LinearSystem sys(a, rng.vector(d, 1.0));
    const Vector x = rng.vector(d, 1.0);
    const Vector two = geodint::exact_step_linear(sys, geodint::exact_step_linear(sys, x, h2), h1);
    const Vector once = geodint::exact_step_linear(sys, x, h1 + h2);
    worst_group = std::max(worst_group, testing_support::rel_diff(two, once));
    const Vector back = geodint::exact_step_linear(sys, geodint::exact_step_linear(sys, x, h1), -h1);
    worst_back = std::max(worst_back, testing_support::rel_diff(back, x));
  }
  CHECK(worst_group <= 1e-12);
  CHECK(worst_back <= 1e-12);
}

TEST_CASE("oscillator examples") {
  const HarmonicOscillator unit(one(1), Vector{0});
  const auto q = geodint::exact_step_oscillator(unit, Vector{1}, Vector{0}, pi / 2);
  CHECK(std::abs(q.x[0]) <= 1e-15);
  CHECK(q.p[0] == doctest::Approx(-1).epsilon(1e-15));

  const HarmonicOscillator driven(one(1), Vector{1});
  const auto h = geodint::exact_step_oscillator(driven, Vector{0}, Vector{0}, pi);
  CHECK(h.x[0] == doctest::Approx(2).epsilon(1e-14));
  CHECK(std::abs(h.p[0]) <= 1e-14);

  CHECK(geodint::oscillator_energy(unit, Vector{1}, Vector{0}) == 0.5);
  CHECK(geodint::oscillator_energy(driven, Vector{0}, Vector{0}) == 0.0);
}

TEST_CASE("oscillator energy needs a symmetric Omega") {
  const HarmonicOscillator osc(Matrix::from_rows({{1, 0.5}, {0, 1}}), Vector{0, 0});
  CHECK_FALSE(osc.symmetric());
  CHECK_THROWS_AS(geodint::oscillator_energy(osc, Vector{1, 0}, Vector{0, 0}), geodint::Error);
}

TEST_CASE("oscillator step matches the first order linear flow") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = rng.index(1, 3);
    const Matrix omega = rng.matrix(m, 1.0);
    const Vector a = rng.vector(m, 1.0);
    const HarmonicOscillator osc(omega, a);
    const Vector x = rng.vector(m, 1.0), p = rng.vector(m, 1.0);
    const double h = rng.uniform(-2.0, 2.0);
    // y = (x, p), y' = [[0, I], [-Omega^2, 0]] y + (0, a)
    const Matrix big = Matrix::from_blocks(Matrix::zero(m), Matrix::identity(m), -osc.omega_squared(), Matrix::zero(m));
    const Vector y = geodint::exact_step_linear(LinearSystem(big, geodint::concat(Vector(m), a)), geodint::concat(x, p), h);
    const auto s = geodint::exact_step_oscillator(osc, x, p, h);
    CHECK(testing_support::rel_diff(geodint::concat(s.x, s.p), y) <= 1e-12);
  }
}

TEST_CASE("oscillator energy is conserved step to step") {
  Rng rng(6);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = rng.index(1, 4);
    const HarmonicOscillator osc(random_frequency(rng, m, 0.3, 2.0), rng.vector(m, 1.0));
    const Vector x = rng.vector(m, 1.0), p = rng.vector(m, 1.0);
    const double e0 = geodint::oscillator_energy(osc, x, p);
    const auto s = geodint::exact_step_oscillator(osc, x, p, rng.uniform(-3.0, 3.0));
    const double e1 = geodint::oscillator_energy(osc, s.x, s.p);
    worst = std::max(worst, std::abs(e1 - e0) / std::max(1.0, std::abs(e0)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("oscillator step agrees with the tangent delta form") {
  // x1 - x0 = delta (p1 + p0)/2, p1 - p0 = -delta (Omega^2 (x1 + x0)/2 - a),
  // delta = h tanc(h Omega / 2), solved as one linear system for (x1, p1).
  Rng rng(13);
  double worst = 0.0;
  int used = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = rng.index(1, 3);
    const HarmonicOscillator osc(random_frequency(rng, m, 0.2, 2.5), rng.vector(m, 1.0));
    const double h = rng.uniform(0.05, 1.4);
    const Matrix half = (h / 2) * osc.omega();
    if (geodint::spectral_bound(half) >= pi / 2 - geodint::kTancMargin) continue;
    ++used;
    const Matrix delta = h * geodint::even_fn(half, geodint::EvenKind::Tanc);
    const Vector x = rng.vector(m, 1.0), p = rng.vector(m, 1.0);
    const Matrix I = Matrix::identity(m);
    const Matrix lhs = Matrix::from_blocks(I, -0.5 * delta, 0.5 * delta * osc.omega_squared(), I);
    const Vector top = x + 0.5 * (delta * p);
    const Vector bottom = p - 0.5 * (delta * (osc.omega_squared() * x)) + delta * osc.a();
    const Vector y = geodint::solve(lhs, geodint::concat(top, bottom));
    const auto s = geodint::exact_step_oscillator(osc, x, p, h);
    worst = std::max(worst, geodint::max_abs_diff(geodint::concat(s.x, s.p), y));
  }
  CHECK(used > 100);
  CHECK(worst <= 1e-11);
}
