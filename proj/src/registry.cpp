#include "geodint/registry.hpp"

#include <cmath>

#include "geodint/error.hpp"

namespace geodint {

namespace {

Matrix scalar_matrix(double v) {
  Matrix m(1);
  m(0, 0) = v;
  return m;
}

Problem pendulum() {
  HamiltonianSystem s;
  s.name = "pendulum";
  s.m = 1;
  s.H = [](const Vector& y) { return 0.5 * y[1] * y[1] - std::cos(y[0]); };
  s.Hx = [](const Vector& y) { return Vector{std::sin(y[0])}; };
  s.Hp = [](const Vector& y) { return Vector{y[1]}; };
  s.hessian = [](const Vector& y) {
    return HessianBlocks{scalar_matrix(std::cos(y[0])), scalar_matrix(0.0), scalar_matrix(1.0)};
  };
  s.separable = true;
  s.equilibria = {Vector{0.0, 0.0}};
  return {s, Vector{1.0, 0.0}, "H = p^2/2 - cos x"};
}

Problem quartic() {
  HamiltonianSystem s;
  s.name = "quartic";
  s.m = 1;
  s.H = [](const Vector& y) {
    const double x2 = y[0] * y[0];
    return 0.5 * y[1] * y[1] + 0.25 * x2 * x2 + 0.5 * x2;
  };
  s.Hx = [](const Vector& y) { return Vector{y[0] * y[0] * y[0] + y[0]}; };
  s.Hp = [](const Vector& y) { return Vector{y[1]}; };
  s.hessian = [](const Vector& y) {
    return HessianBlocks{scalar_matrix(3.0 * y[0] * y[0] + 1.0), scalar_matrix(0.0), scalar_matrix(1.0)};
  };
  s.separable = true;
  s.equilibria = {Vector{0.0, 0.0}};
  return {s, Vector{1.0, 0.0}, "H = p^2/2 + x^4/4 + x^2/2"};
}

Problem henon_heiles() {
  HamiltonianSystem s;
  s.name = "henon-heiles";
  s.m = 2;
  s.H = [](const Vector& y) {
    const double x1 = y[0], x2 = y[1], p1 = y[2], p2 = y[3];
    return 0.5 * (p1 * p1 + p2 * p2) + 0.5 * (x1 * x1 + x2 * x2) + x1 * x1 * x2 - x2 * x2 * x2 / 3.0;
  };
  s.Hx = [](const Vector& y) {
    const double x1 = y[0], x2 = y[1];
    return Vector{x1 + 2.0 * x1 * x2, x2 + x1 * x1 - x2 * x2};
  };
  s.Hp = [](const Vector& y) { return Vector{y[2], y[3]}; };
  s.hessian = [](const Vector& y) {
    const double x1 = y[0], x2 = y[1];
    HessianBlocks b{Matrix(2), Matrix(2), Matrix::identity(2)};
    b.xx(0, 0) = 1.0 + 2.0 * x2;
    b.xx(0, 1) = 2.0 * x1;
    b.xx(1, 0) = 2.0 * x1;
    b.xx(1, 1) = 1.0 - 2.0 * x2;
    return b;
  };
  s.separable = true;
  s.equilibria = {Vector{0.0, 0.0, 0.0, 0.0}, Vector{0.0, 1.0, 0.0, 0.0}};
  return {s, Vector{0.1, 0.0, 0.0, 0.3}, "H = |p|^2/2 + |x|^2/2 + x1^2 x2 - x2^3/3"};
}

double kepler_radius(const Vector& y) {
  const double r = std::hypot(y[0], y[1]);
  if (!(r >= kKeplerMinRadius)) {
    throw Error(ErrorKind::DomainViolation, "kepler: |x| = " + std::to_string(r) + " is inside the collision guard");
  }
  return r;
}

Problem kepler() {
  HamiltonianSystem s;
  s.name = "kepler";
  s.m = 2;
  s.H = [](const Vector& y) {
    const double r = kepler_radius(y);
    return 0.5 * (y[2] * y[2] + y[3] * y[3]) - 1.0 / r;
  };
  s.Hx = [](const Vector& y) {
    const double r = kepler_radius(y);
    const double r3 = r * r * r;
    return Vector{y[0] / r3, y[1] / r3};
  };
  s.Hp = [](const Vector& y) { return Vector{y[2], y[3]}; };
  s.hessian = [](const Vector& y) {
    const double r = kepler_radius(y);
    const double r3 = r * r * r;
    const double r5 = r3 * r * r;
    HessianBlocks b{Matrix(2), Matrix(2), Matrix::identity(2)};
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        b.xx(i, j) = (i == j ? 1.0 / r3 : 0.0) - 3.0 * y[i] * y[j] / r5;
      }
    }
    return b;
  };
  s.separable = true;
  // Pericentre of the e = 0.6 orbit with a = 1: r = 0.4, |p| = sqrt((1+e)/(1-e)).
  return {s, Vector{0.4, 0.0, 0.0, 2.0}, "H = |p|^2/2 - 1/|x|"};
}

Problem coupled_linear() {
  const Matrix w2 = Matrix::from_rows({{2.0, -1.0}, {-1.0, 2.0}});
  HamiltonianSystem s;
  s.name = "coupled-linear";
  s.m = 2;
  s.H = [w2](const Vector& y) {
    const Vector x = y.segment(0, 2);
    const Vector p = y.segment(2, 2);
    return 0.5 * dot(p, p) + 0.5 * dot(x, w2 * x);
  };
  s.Hx = [w2](const Vector& y) { return w2 * y.segment(0, 2); };
  s.Hp = [](const Vector& y) { return y.segment(2, 2); };
  s.hessian = [w2](const Vector&) { return HessianBlocks{w2, Matrix(2), Matrix::identity(2)}; };
  s.separable = true;
  s.equilibria = {Vector{0.0, 0.0, 0.0, 0.0}};
  s.linear = LinearSystem(Matrix::from_blocks(Matrix(2), Matrix::identity(2), -w2, Matrix(2)), Vector(4));
  return {s, Vector{1.0, 0.0, 0.0, 0.0}, "H = |p|^2/2 + x^T W x/2, W = [[2,-1],[-1,2]]"};
}

Problem nonseparable() {
  HamiltonianSystem s;
  s.name = "nonseparable";
  s.m = 1;
  s.H = [](const Vector& y) {
    const double x = y[0], p = y[1];
    return 0.5 * p * p / (1.0 + x * x) + 0.5 * x * x;
  };
  s.Hx = [](const Vector& y) {
    const double x = y[0], p = y[1];
    const double q = 1.0 + x * x;
    return Vector{x - p * p * x / (q * q)};
  };
  s.Hp = [](const Vector& y) { return Vector{y[1] / (1.0 + y[0] * y[0])}; };
  s.hessian = [](const Vector& y) {
    const double x = y[0], p = y[1];
    const double q = 1.0 + x * x;
    return HessianBlocks{scalar_matrix(1.0 - p * p * (1.0 - 3.0 * x * x) / (q * q * q)),
                         scalar_matrix(-2.0 * x * p / (q * q)), scalar_matrix(1.0 / q)};
  };
  s.separable = false;
  s.equilibria = {Vector{0.0, 0.0}};
  return {s, Vector{1.0, 0.5}, "H = p^2/(2(1+x^2)) + x^2/2"};
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"pendulum",       "quartic",     "henon-heiles",
                                              "kepler",         "coupled-linear", "nonseparable"};
  return names;
}

HamiltonianSystem make_quadratic(const Matrix& hessian, const Vector& g) {
  const std::size_t d = hessian.dim();
  if (d == 0 || d % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "quadratic Hamiltonian needs an even dimension");
  require_dim(g.size(), d, "quadratic Hamiltonian linear term");
  if (max_abs_diff(hessian, hessian.transpose()) > 1e-13 * std::max(1.0, hessian.max_abs())) {
    throw Error(ErrorKind::NotSymmetric, "quadratic Hamiltonian needs a symmetric Hessian");
  }
  const std::size_t m = d / 2;
  HamiltonianSystem s;
  s.name = "quadratic";
  s.m = m;
  s.H = [hessian, g](const Vector& y) { return 0.5 * dot(y, hessian * y) + dot(g, y); };
  s.Hx = [hessian, g, m](const Vector& y) { return (hessian * y + g).segment(0, m); };
  s.Hp = [hessian, g, m](const Vector& y) { return (hessian * y + g).segment(m, m); };
  HessianBlocks blocks{hessian.block(0, 0, m), hessian.block(0, m, m), hessian.block(m, m, m)};
  s.hessian = [blocks](const Vector&) { return blocks; };
  s.separable = blocks.xp.max_abs() == 0.0;
  const Matrix S = canonical_structure(m);
  s.linear = LinearSystem(S * hessian, S * g);
  return s;
}

Problem make_problem(std::string_view name) {
  if (name == "pendulum") return pendulum();
  if (name == "quartic") return quartic();
  if (name == "henon-heiles") return henon_heiles();
  if (name == "kepler") return kepler();
  if (name == "coupled-linear") return coupled_linear();
  if (name == "nonseparable") return nonseparable();
  throw Error(ErrorKind::Config, "unknown problem: " + std::string(name));
}

}  // namespace geodint
