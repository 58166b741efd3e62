#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geodint/error.hpp"
#include "geodint/matfun.hpp"
#include "support.hpp"

using geodint::EvenKind;
using geodint::Matrix;
using geodint::Vector;
using testing_support::rel_diff;
using testing_support::Rng;

namespace {

constexpr double pi = std::numbers::pi;

Matrix rotation_generator(double angle) { return Matrix::from_rows({{0, angle}, {-angle, 0}}); }

}  // namespace

TEST_CASE("expm examples") {
  CHECK(geodint::expm(Matrix::zero(3)) == Matrix::identity(3));

  const Matrix d = geodint::expm(Matrix::diagonal(Vector{std::log(2.0), std::log(3.0)}));
  CHECK(geodint::max_abs_diff(d, Matrix::diagonal(Vector{2, 3})) <= 1e-14);

  const Matrix r = geodint::expm(rotation_generator(pi / 2));
  CHECK(geodint::max_abs_diff(r, Matrix::from_rows({{0, 1}, {-1, 0}})) <= 1e-15);
}

TEST_CASE("expm against a long double Taylor sum") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = rng.index(1, 6);
    const Matrix m = rng.matrix_with_norm(n, rng.uniform(1e-3, 4.0));
    CHECK(rel_diff(geodint::expm(m), testing_support::taylor_expm(m)) <= 1e-13);
    CHECK(rel_diff(geodint::phi1(m), testing_support::taylor_phi1(m)) <= 1e-13);
  }
}

TEST_CASE("expm of large and tiny arguments") {
  const Matrix big = Matrix::diagonal(Vector{-30, 5});
  const Matrix e = geodint::expm(big);
  CHECK(e(0, 0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-13));
  CHECK(e(1, 1) == doctest::Approx(std::exp(5.0)).epsilon(1e-13));

  const Matrix tiny = Matrix::from_rows({{1e-20, 0}, {0, -1e-20}});
  CHECK(geodint::expm(tiny) == Matrix::identity(2) + tiny);
}

TEST_CASE("non-finite input is rejected") {
  Matrix m = Matrix::identity(2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(geodint::expm(m), geodint::Error);
  CHECK_THROWS_AS(geodint::even_fn(m, EvenKind::Tanhc), geodint::Error);
}

TEST_CASE("phi1 examples") {
  CHECK(geodint::max_abs_diff(geodint::phi1(Matrix::zero(2)), Matrix::identity(2)) == 0.0);
  const Matrix p = geodint::phi1(Matrix::from_rows({{std::log(2.0)}}));
  CHECK(p(0, 0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("phi1 identity on random matrices") {
  Rng rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.index(1, 6);
    const Matrix m = rng.matrix_with_norm(n, rng.uniform(0.0, 2.0));
    const auto ep = geodint::expm_phi1(m);
    Matrix lhs = geodint::phi1(m) * m - geodint::expm(m);
    lhs.add_identity(1.0);
    worst = std::max(worst, lhs.max_abs());
    CHECK(geodint::max_abs_diff(ep.exp, geodint::expm(m)) <= 1e-14);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("phi1 of a singular matrix") {
  // [[0,1],[0,0]] is nilpotent: phi1 = I + M/2
  const Matrix n = Matrix::from_rows({{0, 1}, {0, 0}});
  CHECK(geodint::max_abs_diff(geodint::phi1(n), Matrix::from_rows({{1, 0.5}, {0, 1}})) <= 1e-16);
}

TEST_CASE("even functions at zero") {
  for (EvenKind kind : {EvenKind::Tanc, EvenKind::Tanhc, EvenKind::Xcothx}) {
    CHECK(geodint::even_fn(Matrix::zero(3), kind) == Matrix::identity(3));
  }
}

TEST_CASE("tanc at a quarter turn") {
  // tan(pi/4)/(pi/4); an argument of pi/2 itself sits on the pole.
  const Matrix t = geodint::even_fn(Matrix::from_rows({{pi / 4}}), EvenKind::Tanc);
  CHECK(t(0, 0) == doctest::Approx(4.0 / pi).epsilon(1e-14));
  CHECK(t(0, 0) == doctest::Approx(1.27324).epsilon(1e-5));
  CHECK_THROWS_AS(geodint::even_fn(Matrix::from_rows({{pi / 2}}), EvenKind::Tanc), geodint::Error);
}

TEST_CASE("tanc guard margin") {
  const double edge = pi / 2 - geodint::kTancMargin;
  CHECK_NOTHROW(geodint::even_fn(Matrix::from_rows({{edge - 1e-3}}), EvenKind::Tanc));
  try {
    (void)geodint::even_fn(Matrix::from_rows({{edge + 1e-3}}), EvenKind::Tanc);
    FAIL("expected ArgumentTooLarge");
  } catch (const geodint::Error& e) {
    CHECK(e.kind() == geodint::ErrorKind::ArgumentTooLarge);
  }
}

TEST_CASE("scalar even functions against the closed forms") {
  for (double z : {1e-9, 1e-3, 0.1, 0.5, 1.0, 1.4, -0.7}) {
    const Matrix m = Matrix::from_rows({{z}});
    CHECK(geodint::even_fn(m, EvenKind::Tanhc)(0, 0) ==
          doctest::Approx(static_cast<double>(testing_support::tanhc(z))).epsilon(1e-15));
    CHECK(geodint::even_fn(m, EvenKind::Tanc)(0, 0) ==
          doctest::Approx(static_cast<double>(testing_support::tanc(z))).epsilon(1e-15));
    CHECK(geodint::even_fn(m, EvenKind::Xcothx)(0, 0) ==
          doctest::Approx(static_cast<double>(testing_support::xcothx(z))).epsilon(1e-15));
  }
  for (double z : {3.0, 8.0, 25.0}) {
    const Matrix m = Matrix::from_rows({{z}});
    CHECK(geodint::even_fn(m, EvenKind::Tanhc)(0, 0) == doctest::Approx(std::tanh(z) / z).epsilon(1e-14));
    CHECK(geodint::even_fn(m, EvenKind::Xcothx)(0, 0) == doctest::Approx(z / std::tanh(z)).epsilon(1e-14));
  }
}

TEST_CASE("imaginary arguments swap tan and tanh") {
  // M = w [[0,1],[-1,0]] has M^2 = -w^2 I, so tanhc(M) = tanc(w) I.
  const double w = 1.1;
  const Matrix th = geodint::even_fn(rotation_generator(w), EvenKind::Tanhc);
  CHECK(geodint::max_abs_diff(th, (std::tan(w) / w) * Matrix::identity(2)) <= 1e-14);
  const Matrix tc = geodint::even_fn(rotation_generator(1.2), EvenKind::Tanc);
  CHECK(geodint::max_abs_diff(tc, (std::tanh(1.2) / 1.2) * Matrix::identity(2)) <= 1e-14);
  const Matrix sq = geodint::even_fn_of_square(Matrix::from_rows({{-0.49}}), EvenKind::Tanc);
  CHECK(sq(0, 0) == doctest::Approx(std::tanh(0.7) / 0.7).epsilon(1e-15));
}

TEST_CASE("evenness is bit-exact") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(1, 6);
    const Matrix m = rng.matrix_with_norm(n, rng.uniform(0.0, 1.0));
    for (EvenKind kind : {EvenKind::Tanc, EvenKind::Tanhc, EvenKind::Xcothx}) {
      CHECK(geodint::even_fn(m, kind) == geodint::even_fn(-m, kind));
    }
  }
}

TEST_CASE("reciprocal identity of tanhc and xcothx") {
  Rng rng(12);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.index(1, 6);
    const Matrix m = rng.matrix_with_norm(n, rng.uniform(0.0, 1.0));
    Matrix prod = geodint::even_fn(m, EvenKind::Tanhc) * geodint::even_fn(m, EvenKind::Xcothx);
    prod.add_identity(-1.0);
    worst = std::max(worst, prod.max_abs());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("symmetric arguments against the Jacobi eigen oracle") {
  Rng rng(31);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(1, 5);
    const Matrix s = rng.symmetric(n, rng.uniform(0.05, 0.5));
    const auto expect = [&](auto f) { return testing_support::spectral_apply(s, f); };
    worst = std::max(worst, rel_diff(geodint::expm(s), expect([](long double z) { return std::exp(z); })));
    worst = std::max(worst, rel_diff(geodint::phi1(s), expect([](long double z) {
                                       return z == 0.0L ? 1.0L : std::expm1(z) / z;
                                     })));
    worst = std::max(worst, rel_diff(geodint::even_fn(s, EvenKind::Tanhc), expect(testing_support::tanhc)));
    worst = std::max(worst, rel_diff(geodint::even_fn(s, EvenKind::Xcothx), expect(testing_support::xcothx)));
    if (geodint::spectral_bound(s) < 1.4) {
      worst = std::max(worst, rel_diff(geodint::even_fn(s, EvenKind::Tanc), expect(testing_support::tanc)));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("solve examples") {
  const Vector b{3, -1};
  CHECK(geodint::solve(Matrix::identity(2), b) == b);
  const Vector x = geodint::solve(Matrix::diagonal(Vector{2, 4}), Vector{2, 4});
  CHECK(x == Vector{1, 1});
  try {
    (void)geodint::solve(Matrix::from_rows({{1, 2}, {2, 4}}), b);
    FAIL("expected SingularMatrix");
  } catch (const geodint::Error& e) {
    CHECK(e.kind() == geodint::ErrorKind::SingularMatrix);
  }
}

TEST_CASE("solve undoes expm") {
  Rng rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(1, 6);
    const Matrix m = rng.matrix_with_norm(n, rng.uniform(0.0, 2.0));
    const Vector b = rng.vector(n, 1.0);
    const Matrix e = geodint::expm(m);
    worst = std::max(worst, geodint::max_abs_diff(geodint::solve(e, e * b), b));
    const Matrix bm = rng.matrix(n, 1.0);
    worst = std::max(worst, geodint::max_abs_diff(geodint::solve(e, e * bm), bm));
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("spectral bound") {
  CHECK(geodint::spectral_bound(Matrix::zero(3)) == 0.0);
  CHECK(geodint::spectral_bound(Matrix::diagonal(Vector{3, -5})) >= 5.0);
  const double w = 7.0;
  const double rho = geodint::spectral_bound(Matrix::from_rows({{0, 1}, {-w * w, 0}}));
  CHECK(rho >= w);
  CHECK(rho <= 1.2 * w);  // the squared powers tighten the crude norm bound of 49

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix s = rng.symmetric(rng.index(1, 5), 1.0);
    const auto eig = testing_support::jacobi_eigen(s);
    long double radius = 0.0L;
    for (long double v : eig.values) radius = std::max(radius, std::fabs(v));
    CHECK(geodint::spectral_bound(s) >= static_cast<double>(radius) * (1 - 1e-14));
  }
}
