#pragma once

#include <vector>

#include "geodint/linalg.hpp"

namespace geodint {

enum class EvenKind { Tanhc, Tanc, Xcothx };

const char* to_string(EvenKind kind) noexcept;

// Scaling and squaring with diagonal Pade approximants up to degree 13.
Matrix expm(const Matrix& m);

struct ExpPhi1 {
  Matrix exp;
  Matrix phi1;
};

// e^M and phi1(M) = sum M^k/(k+1)! from one exponential of [[M, I], [0, 0]].
ExpPhi1 expm_phi1(const Matrix& m);
Matrix phi1(const Matrix& m);

// tanh(z)/z, tan(z)/z or z*coth(z) applied to M. Only M*M is ever formed,
// which makes f(M) and f(-M) bit-identical.
Matrix even_fn(const Matrix& m, EvenKind kind);
// Same function with the square X = M^2 supplied directly. X may have
// negative spectrum (tanc of an imaginary argument is tanhc of its modulus).
Matrix even_fn_of_square(const Matrix& x, EvenKind kind);

// Rejection threshold of the tanc guard, on the spectral bound of M.
inline constexpr double kTancMargin = 0.05;

class LuFactorization {
 public:
  // Throws SingularMatrix when a pivot falls below 1e-14 * ||M||_inf.
  explicit LuFactorization(const Matrix& m);

  std::size_t dim() const noexcept { return lu_.dim(); }
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

Vector solve(const Matrix& m, const Vector& b);
Matrix solve(const Matrix& m, const Matrix& b);

// Upper bound on the spectral radius: the smaller of the 1- and inf-norms,
// tightened with norms of M^2, M^4, M^8 and M^16. Tightening stops early once
// the bound is below `enough`.
double spectral_bound(const Matrix& m, double enough = 0.0);

}  // namespace geodint
