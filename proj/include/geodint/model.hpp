#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geodint/exact_linear.hpp"
#include "geodint/linalg.hpp"

namespace geodint {

// y' = F(y) with Jacobian F'(y).
struct VectorField {
  std::size_t dim = 0;
  std::function<Vector(const Vector&)> F;
  std::function<Matrix(const Vector&)> jacobian;
  // Present when F(y) = A y + b exactly; lets the oracle use the closed form.
  std::optional<LinearSystem> linear;
};

VectorField linear_field(const LinearSystem& sys);

struct HessianBlocks {
  Matrix xx;
  Matrix xp;  // d^2 H / dx_i dp_j
  Matrix pp;
};

// Canonical system with m degrees of freedom. Every callable takes the
// stacked state y = (x_1..x_m, p_1..p_m).
struct HamiltonianSystem {
  std::string name;
  std::size_t m = 0;
  std::function<double(const Vector&)> H;
  std::function<Vector(const Vector&)> Hx;
  std::function<Vector(const Vector&)> Hp;
  std::function<HessianBlocks(const Vector&)> hessian;
  // H = T(p) + V(x), so H_xp vanishes identically.
  bool separable = false;
  // States where F evaluates to exactly zero in floating point.
  std::vector<Vector> equilibria;
  std::optional<LinearSystem> linear;

  std::size_t dim() const noexcept { return 2 * m; }
};

double energy(const HamiltonianSystem& sys, const Vector& y);
// (H_x, H_p) stacked.
Vector gradient(const HamiltonianSystem& sys, const Vector& y);
// [[H_xx, H_xp], [H_px, H_pp]]
Matrix full_hessian(const HamiltonianSystem& sys, const Vector& y);

// S = [[0, I], [-I, 0]] of size 2m.
Matrix canonical_structure(std::size_t m);

// F = (H_p, -H_x)
Vector hamiltonian_field(const HamiltonianSystem& sys, const Vector& y);
// F' = [[H_px, H_pp], [-H_xx, -H_xp]]
Matrix hamiltonian_jacobian(const HamiltonianSystem& sys, const Vector& y);
Matrix hamiltonian_jacobian(const HessianBlocks& blocks);

VectorField as_vector_field(const HamiltonianSystem& sys);

struct RefPolicy {
  enum class Tag { Current, Next, Midpoint, Fixed };

  Tag tag = Tag::Current;
  Vector point;  // used by Fixed only

  static RefPolicy current() { return {Tag::Current, {}}; }
  static RefPolicy next() { return {Tag::Next, {}}; }
  static RefPolicy midpoint() { return {Tag::Midpoint, {}}; }
  static RefPolicy fixed(Vector y) { return {Tag::Fixed, std::move(y)}; }

  // The reference moves with the unknown y_{n+1}.
  bool depends_on_next() const noexcept { return tag == Tag::Next || tag == Tag::Midpoint; }
};

const char* to_string(RefPolicy::Tag tag) noexcept;

Vector resolve_reference(const RefPolicy& policy, const Vector& y_n, const Vector& y_next);

}  // namespace geodint
