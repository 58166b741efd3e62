#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "geodint/error.hpp"
#include "geodint/solver.hpp"
#include "support.hpp"

using geodint::Matrix;
using geodint::SolverConfig;
using geodint::Vector;

TEST_CASE("config validation") {
  CHECK_NOTHROW(geodint::validate(SolverConfig{}));
  CHECK_THROWS_AS(geodint::validate(SolverConfig{0.0, 50, geodint::Predictor::ExponentialEuler}), geodint::Error);
  CHECK_THROWS_AS(geodint::validate(SolverConfig{1e-13, 0, geodint::Predictor::ExponentialEuler}), geodint::Error);
  CHECK_THROWS_AS(geodint::validate(SolverConfig{std::nan(""), 5, geodint::Predictor::ForwardEuler}), geodint::Error);
}

TEST_CASE("linear residual converges in at most two iterations") {
  testing_support::Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = rng.index(1, 6);
    Matrix m = rng.matrix(d, 1.0);
    m.add_identity(3.0);
    const Vector c = rng.vector(d, 2.0);
    const auto res = geodint::solve_implicit([&](const Vector& y) { return m * y - c; }, Vector(d), {});
    CHECK(res.iterations <= 2);
    CHECK(geodint::max_abs_diff(m * res.y, c) <= 1e-12);
  }
}

TEST_CASE("a guess that is already a root costs nothing") {
  const auto res = geodint::solve_implicit([](const Vector& y) { return Vector{y[0] - 1.0}; }, Vector{1.0}, {});
  CHECK(res.iterations == 0);
  CHECK(res.y == Vector{1.0});
}

TEST_CASE("nonlinear scalar root") {
  const auto res =
      geodint::solve_implicit([](const Vector& y) { return Vector{y[0] * y[0] - 2.0}; }, Vector{1.0}, {});
  CHECK(res.y[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(res.residual <= 1e-13 * (1 + res.y.norm_inf()));
}

TEST_CASE("no real root raises NoConvergence") {
  for (double guess : {0.0, 0.5, -3.0}) {
    CAPTURE(guess);
    try {
      (void)geodint::solve_implicit([](const Vector& y) { return Vector{y[0] * y[0] + 1.0}; }, Vector{guess},
                                    SolverConfig{1e-13, 30, geodint::Predictor::ExponentialEuler});
      FAIL("expected NoConvergence");
    } catch (const geodint::NoConvergence& e) {
      CHECK(e.kind() == geodint::ErrorKind::NoConvergence);
      CHECK(e.iterations() <= 30);
      CHECK(e.residual() >= 1.0);
    }
  }
}

TEST_CASE("custom Jacobian is used") {
  int calls = 0;
  const auto jac = [&](const Vector& y, const Vector&) {
    ++calls;
    return Matrix::from_rows({{3 * y[0] * y[0]}});
  };
  const auto res = geodint::solve_implicit([](const Vector& y) { return Vector{y[0] * y[0] * y[0] - 8.0}; },
                                           Vector{3.0}, {}, jac);
  CHECK(calls >= 1);
  CHECK(res.y[0] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("forward difference Jacobian") {
  const geodint::ResidualMap f = [](const Vector& y) { return Vector{std::sin(y[0]) * y[1], y[0] * y[0] - y[1]}; };
  const Vector y{0.7, -1.3};
  const Matrix j = geodint::fd_jacobian(f, y, f(y));
  const Matrix exact = Matrix::from_rows({{std::cos(0.7) * -1.3, std::sin(0.7)}, {1.4, -1.0}});
  CHECK(geodint::max_abs_diff(j, exact) <= 1e-7);
}
