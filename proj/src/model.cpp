#include "geodint/model.hpp"

#include "geodint/error.hpp"

namespace geodint {

VectorField linear_field(const LinearSystem& sys) {
  VectorField f;
  f.dim = sys.A.dim();
  f.F = [A = sys.A, b = sys.b](const Vector& y) { return A * y + b; };
  f.jacobian = [A = sys.A](const Vector&) { return A; };
  f.linear = sys;
  return f;
}

namespace {

void check_state(const HamiltonianSystem& sys, const Vector& y) {
  require_dim(y.size(), sys.dim(), "phase-space state");
  require_finite(y, "phase-space state");
}

}  // namespace

double energy(const HamiltonianSystem& sys, const Vector& y) {
  check_state(sys, y);
  return sys.H(y);
}

Vector gradient(const HamiltonianSystem& sys, const Vector& y) {
  check_state(sys, y);
  return concat(sys.Hx(y), sys.Hp(y));
}

Matrix full_hessian(const HamiltonianSystem& sys, const Vector& y) {
  check_state(sys, y);
  const HessianBlocks b = sys.hessian(y);
  return Matrix::from_blocks(b.xx, b.xp, b.xp.transpose(), b.pp);
}

Matrix canonical_structure(std::size_t m) {
  Matrix s(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    s(i, m + i) = 1.0;
    s(m + i, i) = -1.0;
  }
  return s;
}

Vector hamiltonian_field(const HamiltonianSystem& sys, const Vector& y) {
  check_state(sys, y);
  Vector f = concat(sys.Hp(y), -sys.Hx(y));
  require_finite(f, "vector field");
  return f;
}

Matrix hamiltonian_jacobian(const HessianBlocks& b) {
  const std::size_t m = b.xx.dim();
  Matrix j(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      j(i, k) = b.xp(k, i);
      j(i, m + k) = b.pp(i, k);
      j(m + i, k) = -b.xx(i, k);
      j(m + i, m + k) = -b.xp(i, k);
    }
  }
  return j;
}

Matrix hamiltonian_jacobian(const HamiltonianSystem& sys, const Vector& y) {
  check_state(sys, y);
  Matrix j = hamiltonian_jacobian(sys.hessian(y));
  require_finite(j, "Jacobian");
  return j;
}

VectorField as_vector_field(const HamiltonianSystem& sys) {
  VectorField f;
  f.dim = sys.dim();
  f.F = [sys](const Vector& y) { return hamiltonian_field(sys, y); };
  f.jacobian = [sys](const Vector& y) { return hamiltonian_jacobian(sys, y); };
  f.linear = sys.linear;
  return f;
}

const char* to_string(RefPolicy::Tag tag) noexcept {
  switch (tag) {
    case RefPolicy::Tag::Current: return "current";
    case RefPolicy::Tag::Next: return "next";
    case RefPolicy::Tag::Midpoint: return "midpoint";
    case RefPolicy::Tag::Fixed: return "fixed";
  }
  return "?";
}

Vector resolve_reference(const RefPolicy& policy, const Vector& y_n, const Vector& y_next) {
  require_dim(y_next.size(), y_n.size(), "reference candidates");
  switch (policy.tag) {
    case RefPolicy::Tag::Current: return y_n;
    case RefPolicy::Tag::Next: return y_next;
    case RefPolicy::Tag::Midpoint: {
      Vector mid(y_n.size());
      for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (y_n[i] + y_next[i]);
      return mid;
    }
    case RefPolicy::Tag::Fixed:
      require_dim(policy.point.size(), y_n.size(), "fixed reference point");
      return policy.point;
  }
  return y_n;
}

}  // namespace geodint
