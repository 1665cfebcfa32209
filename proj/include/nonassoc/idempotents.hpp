#pragma once

/**
 * @file idempotents.hpp
 * @brief Enumeration and certification of nonzero idempotents.
 *
 * Three enumerators: a closed form for the cyclotomic model C_n, seeded
 * Newton iteration over C, and exhaustive search over F_p. Sets are returned
 * in a canonical order so that downstream tables and reports are stable.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "nonassoc/algebra.hpp"

namespace nonassoc {

inline constexpr std::uint64_t kDefaultSeed = 20240917ULL;

enum class EnumerationMethod { ClosedForm, Newton, BruteForce };

inline const char* to_string(EnumerationMethod m) {
  switch (m) {
    case EnumerationMethod::ClosedForm: return "closed-form";
    case EnumerationMethod::Newton: return "newton";
    case EnumerationMethod::BruteForce: return "brute";
  }
  return "unknown";
}

template <FieldScalar F>
struct IdempotentSet {
  std::vector<Vec<F>> elements;
  std::vector<double> residuals;
  EnumerationMethod method = EnumerationMethod::Newton;
  bool complete = false;
  /// Some converged Newton root had a (numerically) singular Jacobian.
  bool singular_jacobian = false;

  std::size_t size() const { return elements.size(); }
};

inline std::uint64_t expected_idempotent_count(std::size_t n) { return (std::uint64_t{1} << n) - 1; }

// ---- canonical order ----------------------------------------------------------

namespace detail {

inline double round6(double v) {
  const double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // fold -0
}

inline std::vector<double> order_key(const Vec<Complex>& v) {
  std::vector<double> k;
  k.reserve(2 * v.size());
  for (const auto& z : v) {
    k.push_back(round6(z.real()));
    k.push_back(round6(z.imag()));
  }
  return k;
}

inline std::vector<double> order_key(const Vec<Fp>& v) {
  std::vector<double> k;
  k.reserve(v.size());
  for (const auto& z : v) k.push_back(static_cast<double>(z.value()));
  return k;
}

}  // namespace detail

/// Sorts elements (and residuals alongside) lexicographically on rounded
/// coordinates (C: re, im per coordinate) or residues (F_p).
template <FieldScalar F>
void canonical_sort(IdempotentSet<F>& s) {
  std::vector<std::size_t> idx(s.elements.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::vector<double>> keys;
  keys.reserve(idx.size());
  for (const auto& e : s.elements) keys.push_back(detail::order_key(e));
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  IdempotentSet<F> out;
  for (auto i : idx) {
    out.elements.push_back(s.elements[i]);
    out.residuals.push_back(s.residuals[i]);
  }
  s.elements = std::move(out.elements);
  s.residuals = std::move(out.residuals);
}

// ---- closed form for C_n ------------------------------------------------------

/// All 2^n - 1 nonzero idempotents of C_n in the monomial basis.
///
/// An element p is idempotent iff its values v_k = p(eps^k) satisfy
/// v_{k+1}^2 = v_k. Taking v_0 = omega^j with omega a primitive (2^n-1)-th
/// root forces v_k = omega^(j 2^((n-1)k)); coefficients follow by inverse DFT.
inline IdempotentSet<Complex> enumerate_closed_form_Cn(int n) {
  if (n < 1) throw Error(ErrorCode::Usage, "C_n needs n >= 1");
  const auto N = static_cast<std::int64_t>(expected_idempotent_count(static_cast<std::size_t>(n)));
  const FieldDescriptor fd = FieldDescriptor::complex();
  // 2^((n-1)k) mod N, k = 0..n-1
  std::vector<std::int64_t> twos(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    std::int64_t t = 1;
    for (int r = 0; r < (n - 1) * k; ++r) t = (2 * t) % N;
    twos[static_cast<std::size_t>(k)] = t;
  }
  IdempotentSet<Complex> out;
  out.method = EnumerationMethod::ClosedForm;
  for (std::int64_t j = 1; j <= N; ++j) {
    Vec<Complex> x(static_cast<std::size_t>(n), Complex{});
    for (int k = 0; k < n; ++k) {
      const Complex v = root_power<Complex>(N, (j * twos[static_cast<std::size_t>(k)]) % N, fd);
      for (int m = 0; m < n; ++m) x[static_cast<std::size_t>(m)] += v * root_power<Complex>(n, -m * k, fd);
    }
    for (auto& c : x) c /= static_cast<double>(n);
    out.elements.push_back(std::move(x));
  }
  // Residuals need the algebra; computed by the overload below. Here we use
  // the polynomial form directly: (p o p)(z) = p(eps z)^2.
  for (const auto& x : out.elements) {
    Vec<Complex> sq(static_cast<std::size_t>(n), Complex{});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sq[static_cast<std::size_t>((i + j) % n)] += root_power<Complex>(n, i + j, fd) *
                                                    x[static_cast<std::size_t>(i)] *
                                                    x[static_cast<std::size_t>(j)];
    out.residuals.push_back(distance(sq, x));
  }
  out.complete = true;
  canonical_sort(out);
  return out;
}

// ---- Newton -------------------------------------------------------------------

struct NewtonOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t budget = 0;  // 0: 200 * 2^n starts
  int max_iterations = 100;
  Tolerance tol{};
};

/// Seeded multi-start Newton iteration on F(x) = x*x - x.
///
/// Steps are least-squares solutions of (2 L_x - I) dx = F(x), so iterations
/// pass through singular Jacobians (as happens on curves of idempotents).
/// The whole budget is always spent; stopping at 2^n - 1 roots would
/// mislabel an algebra with more roots as complete.
inline IdempotentSet<Complex> enumerate_newton(const Algebra<Complex>& a, const NewtonOptions& opt = {}) {
  FieldOps<Complex>::check(a.field());
  const std::size_t n = a.dim();
  const std::size_t budget = opt.budget ? opt.budget : 200 * (std::size_t{1} << n);
  const auto& tol = opt.tol;
  std::mt19937_64 rng(opt.seed);
  IdempotentSet<Complex> out;
  out.method = EnumerationMethod::Newton;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < budget; ++s) {
    Vec<Complex> x = random_element(a, rng);
    bool converged = false;
    double res = 0.0;
    for (int it = 0; it < opt.max_iterations; ++it) {
      const Vec<Complex> f = mul(a, x, x) - x;
      res = norm(f);
      if (res < tol.newton_tol) {
        converged = true;
        break;
      }
      if (!std::isfinite(res) || norm(x) > 1e8) break;
      const Eigen::MatrixXcd j = 2.0 * to_eigen(left_mul_matrix(a, x)) - id;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXcd step = svd.solve(to_eigen(f));
      x = x - from_eigen_vec(step);
    }
    if (!converged || norm(x) < tol.dedupe_tol) continue;
    bool dup = false;
    for (const auto& e : out.elements)
      if (distance(e, x) < tol.dedupe_tol) {
        dup = true;
        break;
      }
    if (dup) continue;
    const Eigen::MatrixXcd j = 2.0 * to_eigen(left_mul_matrix(a, x)) - id;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(j);
    if (svd.singularValues()(static_cast<Eigen::Index>(n) - 1) < 1e-8) out.singular_jacobian = true;
    out.residuals.push_back(res);
    out.elements.push_back(std::move(x));
  }
  out.complete = !out.singular_jacobian && out.elements.size() == expected_idempotent_count(n);
  canonical_sort(out);
  return out;
}

// ---- brute force over F_p -----------------------------------------------------

inline IdempotentSet<Fp> enumerate_brute_force(const Algebra<Fp>& a) {
  FieldOps<Fp>::check(a.field());
  const std::uint32_t p = a.field().p();
  const std::size_t n = a.dim();
  double space = 1.0;
  for (std::size_t i = 0; i < n; ++i) space *= p;
  if (space > 1e7)
    throw Error(ErrorCode::SearchSpaceTooLarge, "p^n = " + std::to_string(space) + " exceeds 1e7");
  IdempotentSet<Fp> out;
  out.method = EnumerationMethod::BruteForce;
  Vec<Fp> x = a.zero();
  const auto total = static_cast<std::uint64_t>(space);
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = Fp(static_cast<std::int64_t>(c % p), p);
      c /= p;
    }
    if (mul(a, x, x) == x) {
      out.elements.push_back(x);
      out.residuals.push_back(0.0);
    }
  }
  out.complete = true;
  canonical_sort(out);
  return out;
}

// ---- genericity ---------------------------------------------------------------

template <FieldScalar F>
struct GenericityReport {
  std::size_t count = 0;
  std::uint64_t expected = 0;
  bool half_in_spectrum = false;
  std::optional<Vec<F>> nilpotent_found;
  bool verdict = false;
};

/// Searches for x != 0 with x*x = 0 by Gauss-Newton on [x*x; a.x - 1] for
/// random normalizing functionals a. Returns the first certified hit.
inline std::optional<Vec<Complex>> find_2nilpotent(const Algebra<Complex>& a, std::uint64_t seed,
                                                    std::size_t starts = 0, const Tolerance& tol = {}) {
  const std::size_t n = a.dim();
  if (starts == 0) starts = 20 * (std::size_t{1} << n);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t s = 0; s < starts; ++s) {
    const Vec<Complex> lin = random_element(a, rng);
    Vec<Complex> x = random_element(a, rng);
    for (int it = 0; it < 80; ++it) {
      const Vec<Complex> sq = mul(a, x, x);
      Complex dot = -1.0;
      for (std::size_t i = 0; i < n; ++i) dot += lin[i] * x[i];
      Eigen::VectorXcd g(static_cast<Eigen::Index>(n + 1));
      for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = sq[i];
      g(static_cast<Eigen::Index>(n)) = dot;
      if (g.norm() < tol.newton_tol) break;
      if (!std::isfinite(g.norm()) || norm(x) > 1e8) break;
      Eigen::MatrixXcd j(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n));
      j.topRows(static_cast<Eigen::Index>(n)) = 2.0 * to_eigen(left_mul_matrix(a, x));
      for (std::size_t i = 0; i < n; ++i) j(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)) = lin[i];
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
      x = x - from_eigen_vec(svd.solve(g));
    }
    const double nx = norm(x);
    if (std::isfinite(nx) && nx > tol.dedupe_tol && norm(mul(a, x, x)) <= 1e-10 * nx * nx) return x;
  }
  return std::nullopt;
}

/// Exhaustive search over projective representatives (first nonzero entry 1).
inline std::optional<Vec<Fp>> find_2nilpotent(const Algebra<Fp>& a, std::uint64_t = 0, std::size_t = 0,
                                               const Tolerance& = {}) {
  const std::uint32_t p = a.field().p();
  const std::size_t n = a.dim();
  double space = 1.0;
  for (std::size_t i = 0; i < n; ++i) space *= p;
  if (space > 1e7)
    throw Error(ErrorCode::SearchSpaceTooLarge, "p^n = " + std::to_string(space) + " exceeds 1e7");
  Vec<Fp> x = a.zero();
  for (std::uint64_t code = 1; code < static_cast<std::uint64_t>(space); ++code) {
    std::uint64_t c = code;
    std::size_t lead = n;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = Fp(static_cast<std::int64_t>(c % p), p);
      if (lead == n && !x[i].is_zero()) lead = i;
      c /= p;
    }
    if (x[lead].value() != 1) continue;
    if (norm(mul(a, x, x)) == 0.0) return x;
  }
  return std::nullopt;
}

/// True iff 1/2 is a root of det(L_c - tI).
template <FieldScalar F>
bool half_is_eigenvalue(const Algebra<F>& a, const Vec<F>& c) {
  const auto poly = char_poly(left_mul_matrix(a, c), a.field());
  const F v = poly_eval(poly, half<F>(a.field()));
  if constexpr (FieldOps<F>::exact) return v.is_zero();
  else {
    double scale = 0.0;
    for (const auto& x : poly) scale = std::max(scale, std::abs(x));
    return std::abs(v) <= 1e-9 * std::max(1.0, scale);
  }
}

/// Genericity certificate: 2^n - 1 idempotents, 1/2 outside every spectrum, no
/// 2-nilpotents. A Newton set that overflowed the expected count or hit a
/// singular Jacobian is already a non-generic witness and yields verdict false;
/// any other incomplete set is rejected.
template <FieldScalar F>
GenericityReport<F> check_generic(const Algebra<F>& a, const IdempotentSet<F>& idm,
                                  std::uint64_t seed = kDefaultSeed) {
  GenericityReport<F> r;
  r.count = idm.size();
  r.expected = expected_idempotent_count(a.dim());
  if (!idm.complete) {
    if (r.count > r.expected || idm.singular_jacobian) {
      r.verdict = false;
      return r;
    }
    throw Error(ErrorCode::IncompleteSet, "genericity needs a complete idempotent set");
  }
  for (const auto& c : idm.elements)
    if (half_is_eigenvalue(a, c)) {
      r.half_in_spectrum = true;
      break;
    }
  r.nilpotent_found = find_2nilpotent(a, seed);
  r.verdict = r.count == r.expected && !r.half_in_spectrum && !r.nilpotent_found;
  return r;
}

// ---- syzygies -----------------------------------------------------------------

/// max_t |sum_c chi_c(t)/chi_c(1/2) - 2^n (1 - t^n)| over the samples.
inline double syzygy_charpoly(const Algebra<Complex>& a, const IdempotentSet<Complex>& idm,
                              const std::vector<Complex>& t_samples) {
  if (!idm.complete) throw Error(ErrorCode::IncompleteSet, "syzygy needs a complete idempotent set");
  const std::size_t n = a.dim();
  std::vector<Vec<Complex>> polys;
  std::vector<Complex> at_half;
  for (const auto& c : idm.elements) {
    polys.push_back(char_poly(left_mul_matrix(a, c), a.field()));
    at_half.push_back(poly_eval(polys.back(), Complex(0.5, 0.0)));
    if (std::abs(at_half.back()) < 1e-12)
      throw Error(ErrorCode::HalfEigenvalue, "1/2 is an eigenvalue of some idempotent");
  }
  double worst = 0.0;
  const double two_n = std::ldexp(1.0, static_cast<int>(n));
  for (const auto& t : t_samples) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < polys.size(); ++i) sum += poly_eval(polys[i], t) / at_half[i];
    worst = std::max(worst, std::abs(sum - two_n * (1.0 - std::pow(t, static_cast<double>(n)))));
  }
  return worst;
}

/// ||sum_c H(c)|| (isospectral form), or ||sum_c H(c)/chi_c(1/2)|| when
/// @p weighted. @p degree is the degree of the homogeneous map H.
template <FieldScalar F>
double syzygy_moment(const Algebra<F>& a, const IdempotentSet<F>& idm,
                     const std::function<Vec<F>(const Vec<F>&)>& h, int degree, bool weighted = false) {
  if (!idm.complete) throw Error(ErrorCode::IncompleteSet, "syzygy needs a complete idempotent set");
  const int n = static_cast<int>(a.dim());
  if (degree < (weighted ? 0 : 1) || degree > n - 1)
    throw Error(ErrorCode::DegreeTooHigh, "degree " + std::to_string(degree) + " outside the admissible range");
  Vec<F> sum;
  for (const auto& c : idm.elements) {
    Vec<F> v = h(c);
    if (weighted) {
      const F w = poly_eval(char_poly(left_mul_matrix(a, c), a.field()), half<F>(a.field()));
      if (FieldOps<F>::is_zero(w, 1e-12)) throw Error(ErrorCode::HalfEigenvalue, "chi_c(1/2) = 0");
      v = (FieldOps<F>::one(a.field()) / w) * v;
    }
    sum = sum.empty() ? v : sum + v;
  }
  return sum.empty() ? 0.0 : norm(sum);
}

// ---- orbits in C_n ------------------------------------------------------------

inline bool is_cyclotomic_model(const Algebra<Complex>& a) {
  return a.tag() && a.tag()->name == "Cn" && static_cast<std::size_t>(a.tag()->n) == a.dim();
}

/// The orbit {p(eps^k z)} of an idempotent of C_n, duplicates collapsed.
inline std::vector<Vec<Complex>> cyclotomic_orbit(const Algebra<Complex>& a, const Vec<Complex>& p,
                                                  const Tolerance& tol = {}) {
  if (!is_cyclotomic_model(a)) throw Error(ErrorCode::AlgebraMismatch, "orbit needs a C_n model");
  if (!is_idempotent(a, p, tol).ok) throw Error(ErrorCode::NotAnIdempotent, "orbit seed is not idempotent");
  const auto n = static_cast<std::int64_t>(a.dim());
  std::vector<Vec<Complex>> orbit;
  for (std::int64_t k = 0; k < n; ++k) {
    Vec<Complex> q = p;
    for (std::int64_t m = 0; m < n; ++m) q[static_cast<std::size_t>(m)] *= root_power<Complex>(n, k * m, a.field());
    bool dup = false;
    for (const auto& o : orbit)
      if (distance(o, q) < tol.dedupe_tol) dup = true;
    if (!dup) orbit.push_back(std::move(q));
  }
  return orbit;
}

/// Index of @p x in @p idm (within dedupe_tol, exact over F_p), if present.
template <FieldScalar F>
std::optional<std::size_t> find_index(const IdempotentSet<F>& idm, const Vec<F>& x, const Tolerance& tol = {}) {
  for (std::size_t i = 0; i < idm.size(); ++i) {
    if constexpr (FieldOps<F>::exact) {
      if (idm.elements[i] == x) return i;
    } else if (distance(idm.elements[i], x) < tol.dedupe_tol) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace nonassoc
