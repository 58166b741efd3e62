#include "geodint/matfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "geodint/error.hpp"

namespace geodint {

const char* to_string(EvenKind kind) noexcept {
  switch (kind) {
    case EvenKind::Tanhc: return "tanhc";
    case EvenKind::Tanc: return "tanc";
    case EvenKind::Xcothx: return "xcothx";
  }
  return "?";
}

namespace {

// -------------------------------------------------------------- exponential

constexpr std::array<double, 5> kTheta{1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                       2.097847961257068, 5.371920351148152};

constexpr std::array<double, 4> kB3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kB9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                     2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kB13{64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                      1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                      670442572800.0,      33522128640.0,       1323241920.0,
                                      40840800.0,          960960.0,            16380.0,
                                      182.0,               1.0};

// Numerator/denominator pieces U (odd) and V (even) of the degree-m Pade form,
// for m in {3, 5, 7, 9}, from the precomputed even powers.
template <std::size_t N>
void pade_low(const Matrix& a, const std::array<double, N>& b, const std::vector<Matrix>& even, Matrix& u,
              Matrix& v) {
  const std::size_t n = a.dim();
  Matrix uo(n);
  v = Matrix(n);
  uo.add_identity(b[1]);
  v.add_identity(b[0]);
  for (std::size_t k = 1; 2 * k < N; ++k) {
    uo += b[2 * k + 1] * even[k - 1];
    v += b[2 * k] * even[k - 1];
  }
  u = a * uo;
}

Matrix expm_impl(const Matrix& m) {
  require_finite(m, "expm argument");
  const double norm = m.norm1();

  std::vector<Matrix> even;
  even.reserve(4);
  Matrix u, v;
  int squarings = 0;

  if (norm <= kTheta[3]) {
    const Matrix a2 = m * m;
    even.push_back(a2);
    if (norm <= kTheta[0]) {
      pade_low(m, kB3, even, u, v);
    } else {
      even.push_back(a2 * a2);
      if (norm <= kTheta[1]) {
        pade_low(m, kB5, even, u, v);
      } else {
        even.push_back(even[1] * a2);
        if (norm <= kTheta[2]) {
          pade_low(m, kB7, even, u, v);
        } else {
          even.push_back(even[2] * a2);
          pade_low(m, kB9, even, u, v);
        }
      }
    }
  } else {
    if (norm > kTheta[4]) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta[4])));
    const Matrix a = std::ldexp(1.0, -squarings) * m;
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const auto& b = kB13;
    Matrix inner = b[13] * a6;
    inner += b[11] * a4;
    inner += b[9] * a2;
    Matrix uo = a6 * inner;
    uo += b[7] * a6;
    uo += b[5] * a4;
    uo += b[3] * a2;
    uo.add_identity(b[1]);
    u = a * uo;
    Matrix inner_v = b[12] * a6;
    inner_v += b[10] * a4;
    inner_v += b[8] * a2;
    v = a6 * inner_v;
    v += b[6] * a6;
    v += b[4] * a4;
    v += b[2] * a2;
    v.add_identity(b[0]);
  }

  Matrix r = solve(v - u, v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  require_finite(r, "expm result");
  return r;
}

// ------------------------------------------------------- even-series tables

// zeta(2n) in extended precision. zeta(2) is closed form; the rest is a
// partial sum with an Euler-Maclaurin tail.
long double zeta_even(int n) {
  const long double s = 2.0L * n;
  if (n == 1) return std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L;
  constexpr int kTerms = 64;
  long double sum = 0.0L;
  for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<long double>(k), -s);
  const long double K = kTerms;
  const long double kp = std::pow(K, -s);
  sum += K * kp / (s - 1.0L) + 0.5L * kp + s * kp / (12.0L * K) -
         s * (s + 1.0L) * (s + 2.0L) * kp / (720.0L * K * K * K);
  return sum;
}

constexpr int kMaxTerms = 30;
constexpr double kPhiTaylorRadius = 0.25;

struct SeriesTable {
  // coefficient of X^k, k = 0..kMaxTerms-1
  std::array<double, kMaxTerms> tanc{};
  std::array<double, kMaxTerms> tanhc{};
  std::array<double, kMaxTerms> xcothx{};
};

SeriesTable build_table() {
  SeriesTable t;
  const long double pi2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double>;
  long double pi_pow = 1.0L;
  long double four_pow = 1.0L;
  t.xcothx[0] = 1.0;
  for (int n = 1; n <= kMaxTerms; ++n) {
    pi_pow *= pi2;
    four_pow *= 4.0L;
    const long double z = zeta_even(n);
    const long double tn = 2.0L * (four_pow - 1.0L) * z / pi_pow;
    t.tanc[n - 1] = static_cast<double>(tn);
    t.tanhc[n - 1] = static_cast<double>((n % 2 == 1) ? tn : -tn);
    if (n < kMaxTerms) {
      const long double cn = 2.0L * z / pi_pow;
      t.xcothx[n] = static_cast<double>((n % 2 == 1) ? cn : -cn);
    }
  }
  return t;
}

const SeriesTable& table() {
  static const SeriesTable t = build_table();
  return t;
}

const std::array<double, kMaxTerms>& coefficients(EvenKind kind) {
  switch (kind) {
    case EvenKind::Tanc: return table().tanc;
    case EvenKind::Tanhc: return table().tanhc;
    case EvenKind::Xcothx: break;
  }
  return table().xcothx;
}

double small_norm(const Matrix& m) { return std::min(m.norm1(), m.norm_inf()); }

// Horner evaluation of the truncated series at a matrix with norm <= r.
Matrix even_series(const Matrix& x, EvenKind kind, double r) {
  const auto& c = coefficients(kind);
  int last = 0;
  double rk = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    rk *= r;
    last = k;
    if (std::abs(c[k]) * rk <= 2e-17) break;
  }
  if (r == 0.0) last = 0;
  Matrix s(x.dim());
  s.add_identity(c[last]);
  for (int k = last - 1; k >= 0; --k) {
    s = s * x;
    s.add_identity(c[k]);
  }
  return s;
}

}  // namespace

Matrix expm(const Matrix& m) { return expm_impl(m); }

ExpPhi1 expm_phi1(const Matrix& m) {
  const std::size_t n = m.dim();
  require_finite(m, "expm argument");
  const double norm = m.norm1();
  if (norm <= kPhiTaylorRadius) {
    // phi1 = sum M^k / (k+1)!, then e^M = I + M phi1.
    int last = 1;
    double term = norm / 2.0;
    while (term > 1e-18 && last < 24) {
      ++last;
      term *= norm / (last + 1);
    }
    std::array<double, 26> inv_fact{};
    inv_fact[0] = 1.0;
    for (int k = 1; k <= last + 1; ++k) inv_fact[k] = inv_fact[k - 1] / k;
    Matrix p(n);
    p.add_identity(inv_fact[last + 1]);
    for (int k = last - 1; k >= 0; --k) {
      p = m * p;
      p.add_identity(inv_fact[k + 1]);
    }
    Matrix e = m * p;
    e.add_identity(1.0);
    return {std::move(e), std::move(p)};
  }
  Matrix aug(2 * n);
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = 1.0;
  const Matrix e = expm_impl(aug);
  return {e.block(0, 0, n), e.block(0, n, n)};
}

Matrix phi1(const Matrix& m) { return expm_phi1(m).phi1; }

Matrix even_fn(const Matrix& m, EvenKind kind) {
  require_finite(m, "even_fn argument");
  if (kind == EvenKind::Tanc && spectral_bound(m) >= std::numbers::pi / 2 - kTancMargin) {
    throw Error(ErrorKind::ArgumentTooLarge, "tanc argument too close to the first pole");
  }
  return even_fn_of_square(m * m, kind);
}

Matrix even_fn_of_square(const Matrix& x, EvenKind kind) {
  require_finite(x, "even_fn argument");
  if (kind == EvenKind::Tanc && std::sqrt(spectral_bound(x)) >= std::numbers::pi / 2 - kTancMargin) {
    throw Error(ErrorKind::ArgumentTooLarge, "tanc argument too close to the first pole");
  }
  const double norm = small_norm(x);
  int s = 0;
  while (std::ldexp(norm, -2 * s) > 0.25) ++s;
  const Matrix xs = std::ldexp(1.0, -2 * s) * x;
  Matrix f = even_series(xs, kind, std::ldexp(norm, -2 * s));

  for (int j = s; j >= 1; --j) {
    const Matrix xj = std::ldexp(1.0, -2 * j) * x;
    switch (kind) {
      case EvenKind::Tanhc: {
        Matrix d = xj * (f * f);
        d.add_identity(1.0);
        f = solve(d, f);
        break;
      }
      case EvenKind::Tanc: {
        Matrix d = -(xj * (f * f));
        d.add_identity(1.0);
        f = solve(d, f);
        break;
      }
      case EvenKind::Xcothx:
        f = solve(f, xj + f * f);
        break;
    }
  }
  require_finite(f, "even_fn result");
  return f;
}

LuFactorization::LuFactorization(const Matrix& m) : lu_(m), perm_(m.dim()) {
  const std::size_t n = m.dim();
  const double threshold = 1e-14 * m.norm_inf();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        p = i;
      }
    }
    if (!(best > threshold)) {
      throw Error(ErrorKind::SingularMatrix, "pivot " + std::to_string(best) + " in column " + std::to_string(k));
    }
    if (p != k) {
      std::swap(perm_[p], perm_[k]);
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
    }
    const double piv = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) / piv;
      lu_(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
    }
  }
}

Vector LuFactorization::solve(const Vector& b) const {
  const std::size_t n = dim();
  require_dim(b.size(), n, "solve right-hand side");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
    x[i] = s / lu_(i, i);
  }
  return x;
}

Matrix LuFactorization::solve(const Matrix& b) const {
  const std::size_t n = dim();
  require_dim(b.dim(), n, "solve right-hand side");
  Matrix x(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) x(i, c) = b(perm_[i], c);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double l = lu_(i, j);
      if (l == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) x(i, c) -= l * x(j, c);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double u = lu_(i, j);
      if (u == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) x(i, c) -= u * x(j, c);
    }
    const double d = lu_(i, i);
    for (std::size_t c = 0; c < n; ++c) x(i, c) /= d;
  }
  return x;
}

Vector solve(const Matrix& m, const Vector& b) { return LuFactorization(m).solve(b); }
Matrix solve(const Matrix& m, const Matrix& b) { return LuFactorization(m).solve(b); }

double spectral_bound(const Matrix& m, double enough) {
  require_finite(m, "spectral_bound argument");
  double bound = small_norm(m);
  if (bound == 0.0) return 0.0;
  Matrix p = m;
  double root = 1.0;
  for (int j = 1; j <= 4 && bound >= enough; ++j) {
    p = p * p;
    root *= 0.5;
    const double nrm = small_norm(p);
    if (!std::isfinite(nrm)) break;
    bound = std::min(bound, std::pow(nrm, root) * (1.0 + 1e-12));
  }
  return bound;
}

}  // namespace geodint
