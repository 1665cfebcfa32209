#pragma once

/**
 * @file peirce.hpp
 * @brief Spectral analysis relative to an idempotent.
 *
 * Peirce decompositions, fusion rules, isospectrality, the cyclotomic
 * eigenbasis with its theta-projections, and the canonical form used to
 * decide isomorphism of medial generic isospectral algebras.
 */

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonassoc/idempotents.hpp"

namespace nonassoc {

template <FieldScalar F>
struct PeirceData {
  Vec<F> idempotent;
  std::vector<F> spectrum;   // with multiplicity, sorted (C: by angle then modulus)
  Matrix<F> eigenbasis;      // columns; column k has eigenvalue column_values[k]
  std::vector<F> column_values;
  bool semisimple = false;
  bool split = true;         // F_p: char poly splits
};

/// Eigen-data of L_c for an idempotent c.
template <FieldScalar F>
PeirceData<F> peirce_decompose(const Algebra<F>& a, const Vec<F>& c, const Tolerance& tol = {}) {
  if (!is_idempotent(a, c, tol).ok) throw Error(ErrorCode::NotAnIdempotent, "Peirce decomposition needs c*c = c");
  const std::size_t n = a.dim();
  const Matrix<F> l = left_mul_matrix(a, c);
  PeirceData<F> pd;
  pd.idempotent = c;
  std::vector<Vec<F>> cols;
  if constexpr (FieldOps<F>::exact) {
    const PrimeSpectrum ps = prime_eigen(l, a.field());
    pd.split = ps.split;
    for (const auto& [v, m] : ps.roots) {
      for (std::size_t i = 0; i < m; ++i) pd.spectrum.push_back(v);
      const auto ker = kernel(l - Matrix<F>::identity(n, a.field()).scaled(v), a.field());
      for (const auto& w : ker) {
        cols.push_back(w);
        pd.column_values.push_back(v);
      }
    }
  } else {
    for (const auto& ep : eigen(l)) {
      for (std::size_t i = 0; i < ep.multiplicity; ++i) pd.spectrum.push_back(ep.value);
      for (const auto& w : ep.vectors) {
        cols.push_back(w);
        pd.column_values.push_back(ep.value);
      }
    }
  }
  pd.eigenbasis = cols.empty() ? Matrix<F>::zeros(n, 0, a.field()) : Matrix<F>::from_columns(cols, n, a.field());
  pd.semisimple = cols.size() == n && rank(pd.eigenbasis) == n;
  return pd;
}

/// Multisets equal under greedy matching within tol (exact over F_p).
template <FieldScalar F>
bool spectra_match(const std::vector<F>& s, const std::vector<F>& t, double tol = 1e-8) {
  if (s.size() != t.size()) return false;
  std::vector<bool> used(t.size(), false);
  for (const auto& x : s) {
    bool found = false;
    for (std::size_t j = 0; j < t.size() && !found; ++j) {
      if (used[j]) continue;
      const bool eq = [&] {
        if constexpr (FieldOps<F>::exact) return x == t[j];
        else return std::abs(x - t[j]) <= tol;
      }();
      if (eq) used[j] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

struct IsospectralReport {
  bool verdict = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // first disagreeing pair
};

/// All idempotents share one spectrum. @p sampled accepts an incomplete set
/// (e.g. points sampled from a curve of idempotents).
template <FieldScalar F>
IsospectralReport is_isospectral(const Algebra<F>& a, const IdempotentSet<F>& idm, bool sampled = false,
                                 double match_tol = 1e-8) {
  if (!idm.complete && !sampled) throw Error(ErrorCode::IncompleteSet, "isospectrality needs a complete set");
  IsospectralReport r;
  r.verdict = true;
  if (idm.size() == 0) return r;
  const auto s0 = peirce_decompose(a, idm.elements[0]).spectrum;
  for (std::size_t i = 1; i < idm.size(); ++i) {
    const auto si = peirce_decompose(a, idm.elements[i]).spectrum;
    if (!spectra_match(s0, si, match_tol)) {
      r.verdict = false;
      r.witness = std::make_pair(std::size_t{0}, i);
      return r;
    }
  }
  return r;
}

/// Spectrum {eps^k : 0 <= k < n}, each simple, with eigenvector columns in
/// the order w_0, ..., w_{n-1}. Returns the reordered basis or throws.
inline Matrix<Complex> cyclotomic_eigencolumns(const PeirceData<Complex>& pd, double tol = 1e-8) {
  const std::size_t n = pd.idempotent.size();
  const FieldDescriptor fd = FieldDescriptor::complex();
  if (pd.column_values.size() != n || pd.spectrum.size() != n)
    throw Error(ErrorCode::NotSimpleSpectrum, "eigenbasis is not complete");
  std::vector<Vec<Complex>> cols(n);
  std::vector<bool> hit(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(pd.column_values[i] - root_power<Complex>(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k), fd)) <= tol) {
        if (hit[k]) throw Error(ErrorCode::NotSimpleSpectrum, "repeated eigenvalue");
        hit[k] = found = true;
        cols[k] = pd.eigenbasis.column(i);
      }
    }
    if (!found) throw Error(ErrorCode::NotSimpleSpectrum, "eigenvalue is not an n-th root of unity");
  }
  return Matrix<Complex>::from_columns(cols, n, fd);
}

/// max over (k, j) of the part of w_k w_j outside span{w_{(k+j) mod n}}.
inline double fusion_check(const Algebra<Complex>& a, const Vec<Complex>& c, const Tolerance& tol = {}) {
  const auto pd = peirce_decompose(a, c, tol);
  const Matrix<Complex> w = cyclotomic_eigencolumns(pd);
  const std::size_t n = a.dim();
  const Matrix<Complex> winv = inverse(w, a.field());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) {
      Vec<Complex> coef = winv * mul(a, w.column(k), w.column(j));
      coef[(k + j) % n] = 0.0;
      worst = std::max(worst, norm(w * coef));
    }
  return worst;
}

/// max over eigenpairs (l1, u) of c1 and (l2, v) of c2 of || c3 (uv) - l1 l2 uv ||, c3 = c1 c2.
inline double cross_fusion_check(const Algebra<Complex>& a, const Vec<Complex>& c1, const Vec<Complex>& c2,
                                 const Tolerance& tol = {}) {
  const Vec<Complex> c3 = mul(a, c1, c2);
  for (const auto* c : {&c1, &c2, &c3})
    if (rank(left_mul_matrix(a, *c)) < a.dim()) throw Error(ErrorCode::NotReduced, "a multiplication operator is singular");
  const auto p1 = peirce_decompose(a, c1, tol);
  const auto p2 = peirce_decompose(a, c2, tol);
  if (!p1.semisimple || !p2.semisimple || !peirce_decompose(a, c3, tol).semisimple)
    throw Error(ErrorCode::NotReduced, "idempotents must be semisimple");
  double worst = 0.0;
  for (std::size_t i = 0; i < p1.column_values.size(); ++i)
    for (std::size_t j = 0; j < p2.column_values.size(); ++j) {
      const Vec<Complex> uv = mul(a, p1.eigenbasis.column(i), p2.eigenbasis.column(j));
      const Complex lam = p1.column_values[i] * p2.column_values[j];
      worst = std::max(worst, norm(mul(a, c3, uv) - lam * uv));
    }
  return worst;
}

// ---- cyclotomic eigenbasis ----------------------------------------------------

/// u_0 = c, u_1 an eps-eigenvector, u_{m+1} = eps^{-(m+1)} u_1 u_m, with u_1
/// scaled so that u_1 u_{n-1} = c. In C_n with c = 1 this is u_m = z^m.
/// Columns of the result are u_0..u_{n-1}.
inline Matrix<Complex> cyclotomic_eigenbasis(const Algebra<Complex>& a, const Vec<Complex>& c, const Tolerance& tol = {}) {
  const std::size_t n = a.dim();
  const auto nn = static_cast<std::int64_t>(n);
  const FieldDescriptor& fd = a.field();
  PeirceData<Complex> pd;
  try {
    pd = peirce_decompose(a, c, tol);
    (void)cyclotomic_eigencolumns(pd);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotSimpleSpectrum) throw Error(ErrorCode::NotIsospectral, e.what());
    throw;
  }
  if (n == 1) return Matrix<Complex>::from_columns({c}, 1, fd);
  const Matrix<Complex> w = cyclotomic_eigencolumns(pd);
  auto build = [&](const Vec<Complex>& u1) {
    std::vector<Vec<Complex>> u = {c, u1};
    for (std::size_t m = 1; m + 1 < n; ++m)
      u.push_back(root_power<Complex>(nn, -static_cast<std::int64_t>(m + 1), fd) * mul(a, u1, u[m]));
    return u;
  };
  Vec<Complex> u1 = w.column(1);
  auto u = build(u1);
  // kappa with u_1 u_{n-1} = kappa c
  const Vec<Complex> last = mul(a, u1, u[n - 1]);
  std::size_t piv = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(c[i]) > std::abs(c[piv])) piv = i;
  const Complex kappa = last[piv] / c[piv];
  if (distance(last, kappa * c) > 1e-8 * std::max(1.0, norm(last)) || std::abs(kappa) < 1e-12)
    throw Error(ErrorCode::NotIsospectral, "u_1 u_{n-1} is not a nonzero multiple of c");
  const Complex t = std::pow(1.0 / kappa, 1.0 / static_cast<double>(n));
  u = build(t * u1);
  return Matrix<Complex>::from_columns(u, n, fd);
}

/// z = sum_m eps^{-mk} L_c^m y must lie on span{u_k}; theta is its u_k-coordinate.
inline std::pair<Complex, Vec<Complex>> theta_projection(const Algebra<Complex>& a, const Vec<Complex>& c, int k,
                                                         const Vec<Complex>& y, const Tolerance& tol = {}) {
  const std::size_t n = a.dim();
  const auto nn = static_cast<std::int64_t>(n);
  const Matrix<Complex> u = cyclotomic_eigenbasis(a, c, tol);
  Vec<Complex> z = a.zero();
  Vec<Complex> lm = y;
  for (std::int64_t m = 0; m < nn; ++m) {
    z = z + root_power<Complex>(nn, -m * k, a.field()) * lm;
    lm = mul(a, c, lm);
  }
  const Vec<Complex> coef = inverse(u, a.field()) * z;
  const auto kk = static_cast<std::size_t>(((k % nn) + nn) % nn);
  Vec<Complex> rest = coef;
  rest[kk] = 0.0;
  const double leak = norm(u * rest);
  if (leak > tol.eq_tol * std::max(1.0, norm(z)) * 100.0)
    throw Error(ErrorCode::ProjectionLeakage, "projection leaks outside span{u_k} by " + std::to_string(leak));
  return {coef[kk], z};
}

// ---- canonical form -----------------------------------------------------------

struct CanonicalForm {
  Vec<Complex> c;
  Vec<Complex> w1;            // normalized: w1^n = c
  Complex mu{};               // w1^n = mu c before normalization
  Matrix<Complex> basis;      // columns b_0 = c, b_m = w1^m
  Algebra<Complex> tensor;    // structure constants in the basis b
  double pattern_residual = 0.0;
};

/// The canonical structure tensor: b_0 b_m = eps^m b_m and, for k, m >= 1,
/// b_k b_m = eps^{-(k-1)(m-1)} b_{k+m} (k+m < n), eps^{-(k-1)(m-1)} b_0 (k+m = n),
/// eps^{-(k-1)(m-1)+1} b_{k+m-n} (k+m > n).
inline Algebra<Complex> canonical_reference(std::size_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  const FieldDescriptor fd = FieldDescriptor::complex();
  return algebra_from_products<Complex>(fd, n, [&](std::size_t k, std::size_t m) {
    Vec<Complex> v(n, Complex{});
    const auto ki = static_cast<std::int64_t>(k);
    const auto mi = static_cast<std::int64_t>(m);
    if (k == 0 || m == 0) {
      v[k + m] = root_power<Complex>(nn, ki + mi, fd);
    } else if (ki + mi < nn) {
      v[k + m] = root_power<Complex>(nn, -(ki - 1) * (mi - 1), fd);
    } else if (ki + mi == nn) {
      v[0] = root_power<Complex>(nn, -(ki - 1) * (mi - 1), fd);
    } else {
      v[k + m - n] = root_power<Complex>(nn, -(ki - 1) * (mi - 1) + 1, fd);
    }
    return v;
  });
}

/// Canonical basis at the idempotent @p c. Throws NotMedialIsospectral when
/// the resulting tensor departs from canonical_reference by more than eq_tol
/// (relative to the tensor scale).
inline CanonicalForm canonical_form(const Algebra<Complex>& a, const Vec<Complex>& c, const Tolerance& tol = {}) {
  const std::size_t n = a.dim();
  const FieldDescriptor& fd = a.field();
  CanonicalForm cf;
  cf.c = c;
  Matrix<Complex> w;
  try {
    w = cyclotomic_eigencolumns(peirce_decompose(a, c, tol));
  } catch (const Error& e) {
    throw Error(ErrorCode::NotMedialIsospectral, e.what());
  }
  if (n == 1) {
    cf.w1 = c;
    cf.mu = 1.0;
    cf.basis = Matrix<Complex>::from_columns({c}, 1, fd);
    cf.tensor = change_basis(a, cf.basis);
    cf.pattern_residual = distance(cf.tensor.tensor(), canonical_reference(1).tensor());
    return cf;
  }
  Vec<Complex> w1 = w.column(1);
  const Vec<Complex> wn = principal_power(a, w1, static_cast<int>(n));
  std::size_t piv = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(c[i]) > std::abs(c[piv])) piv = i;
  cf.mu = wn[piv] / c[piv];
  if (distance(wn, cf.mu * c) > 1e-8 * std::max(1.0, norm(wn)) || std::abs(cf.mu) < 1e-12)
    throw Error(ErrorCode::NotMedialIsospectral, "w1^n is not a nonzero multiple of c");
  const Complex lambda = std::pow(1.0 / cf.mu, 1.0 / static_cast<double>(n));
  w1 = lambda * w1;
  cf.w1 = w1;
  std::vector<Vec<Complex>> b = {c};
  for (std::size_t m = 1; m < n; ++m) b.push_back(principal_power(a, w1, static_cast<int>(m)));
  cf.basis = Matrix<Complex>::from_columns(b, n, fd);
  try {
    cf.tensor = change_basis(a, cf.basis);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotMedialIsospectral, std::string("principal powers are dependent: ") + e.what());
  }
  cf.pattern_residual = distance(cf.tensor.tensor(), canonical_reference(n).tensor());
  if (cf.pattern_residual > std::max(tol.eq_tol, 1e-9) * 10.0)
    throw Error(ErrorCode::NotMedialIsospectral,
                "canonical tensor departs from the reference pattern by " + std::to_string(cf.pattern_residual));
  return cf;
}

/// Canonical form at the first idempotent in canonical order.
inline CanonicalForm canonical_form(const Algebra<Complex>& a, const IdempotentSet<Complex>& idm, const Tolerance& tol = {}) {
  if (idm.size() == 0) throw Error(ErrorCode::NotMedialIsospectral, "no idempotents");
  return canonical_form(a, idm.elements.front(), tol);
}

struct IsomorphismResult {
  std::optional<Matrix<Complex>> matrix;  // M with M(x y) = M(x) M(y)
  double tensor_distance = 0.0;
  double product_residual = 0.0;
  std::string mismatch;                    // first differing entry when not isomorphic
};

/// max over basis pairs of || M(e_i e_j) - M(e_i) M(e_j) ||.
inline double homomorphism_residual(const Algebra<Complex>& a, const Algebra<Complex>& b, const Matrix<Complex>& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      worst = std::max(worst, distance(m * mul(a, a.basis(i), a.basis(j)), mul(b, m.column(i), m.column(j))));
  return worst;
}

inline IsomorphismResult are_isomorphic(const Algebra<Complex>& a, const Vec<Complex>& ca, const Algebra<Complex>& b,
                                        const Vec<Complex>& cb, const Tolerance& tol = {}) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  const CanonicalForm fa = canonical_form(a, ca, tol);
  const CanonicalForm fb = canonical_form(b, cb, tol);
  IsomorphismResult r;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n && r.mismatch.empty(); ++i)
    for (std::size_t j = 0; j < n && r.mismatch.empty(); ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double d = std::abs(fa.tensor.gamma(i, j, k) - fb.tensor.gamma(i, j, k));
        r.tensor_distance = std::max(r.tensor_distance, d);
        if (d > 1e-8) {
          r.mismatch = "gamma[" + std::to_string(i) + "][" + std::to_string(j) + "][" + std::to_string(k) + "]";
          break;
        }
      }
  if (!r.mismatch.empty()) return r;
  const Matrix<Complex> m = fb.basis * inverse(fa.basis, a.field());
  r.product_residual = homomorphism_residual(a, b, m);
  if (r.product_residual <= 1e-8) r.matrix = m;
  else r.mismatch = "change of basis fails to preserve products";
  return r;
}

inline IsomorphismResult are_isomorphic(const Algebra<Complex>& a, const Algebra<Complex>& b, const Tolerance& tol = {}) {
  if (a.dim() != b.dim())
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  const auto ia = enumerate_newton(a);
  const auto ib = enumerate_newton(b);
  if (ia.size() == 0 || ib.size() == 0) throw Error(ErrorCode::NotMedialIsospectral, "no idempotents found");
  return are_isomorphic(a, ia.elements.front(), b, ib.elements.front(), tol);
}

// ---- nonassociative words -----------------------------------------------------

/// Binary tree word in a single letter.
struct Word {
  std::shared_ptr<const Word> left;
  std::shared_ptr<const Word> right;

  static std::shared_ptr<const Word> letter() { return std::make_shared<const Word>(); }
  static std::shared_ptr<const Word> product(std::shared_ptr<const Word> l, std::shared_ptr<const Word> r) {
    return std::make_shared<const Word>(Word{std::move(l), std::move(r)});
  }
  /// Principal power x^m = x (x^{m-1}).
  static std::shared_ptr<const Word> principal(int m) {
    auto w = letter();
    for (int i = 1; i < m; ++i) w = product(letter(), w);
    return w;
  }
  bool is_letter() const { return !left; }
  int degree() const { return is_letter() ? 1 : left->degree() + right->degree(); }
};

inline Vec<Complex> evaluate(const Algebra<Complex>& a, const Word& w, const Vec<Complex>& x) {
  if (w.is_letter()) return x;
  return mul(a, evaluate(a, *w.left, x), evaluate(a, *w.right, x));
}

struct WeakPowerResult {
  Complex b{};
  std::int64_t s = 0;  // b = eps^s
};

/// b with word(w1) = b w1^deg, asserted to be an n-th root of unity.
inline WeakPowerResult verify_weak_power_associativity(const Algebra<Complex>& a, const Vec<Complex>& w1, const Word& word) {
  const std::size_t n = a.dim();
  const auto nn = static_cast<std::int64_t>(n);
  const Vec<Complex> lhs = evaluate(a, word, w1);
  const Vec<Complex> ref = principal_power(a, w1, word.degree());
  std::size_t piv = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(ref[i]) > std::abs(ref[piv])) piv = i;
  if (std::abs(ref[piv]) < 1e-12) throw Error(ErrorCode::NotProportional, "principal power vanishes");
  WeakPowerResult r;
  r.b = lhs[piv] / ref[piv];
  if (distance(lhs, r.b * ref) > 1e-8 * std::max(1.0, norm(ref)))
    throw Error(ErrorCode::NotProportional, "word is not proportional to the principal power");
  for (std::int64_t s = 0; s < nn; ++s)
    if (std::abs(r.b - root_power<Complex>(nn, s, a.field())) < 1e-8) {
      r.s = s;
      return r;
    }
  throw Error(ErrorCode::NotProportional, "ratio is not an n-th root of unity");
}

}  // namespace nonassoc
