#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "geodint/model.hpp"

namespace geodint {

struct Problem {
  HamiltonianSystem system;
  Vector y0;
  std::string description;
};

// Throws Error(Config) for an unknown name.
Problem make_problem(std::string_view name);
const std::vector<std::string>& problem_names();

// H = y^T K y / 2 + g^T y for a symmetric 2m x 2m matrix K. The field is
// linear, so the system carries its LinearSystem.
HamiltonianSystem make_quadratic(const Matrix& hessian, const Vector& g);

// Singular potentials reject states with |x| below this radius.
inline constexpr double kKeplerMinRadius = 1e-8;

}  // namespace geodint
