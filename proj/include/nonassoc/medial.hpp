#pragma once

/**
 * @file medial.hpp
 * @brief The medial law (xy)(zw) = (xz)(yw) and its consequences.
 *
 * Every check returns a residual; callers compare against their own
 * tolerance. Sampled checks are seeded and deterministic.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nonassoc/peirce.hpp"

namespace nonassoc {

struct MedialReport {
  double basis_quadruple_residual = 0.0;
  double squared_identity_residual = 0.0;
  bool verdict = false;
};

/// max over basis quadruples of ||(e_i e_j)(e_k e_l) - (e_i e_k)(e_j e_l)||.
/// Quadruples related by the symmetries of the law (i <-> l, j <-> k) are visited once.
template <FieldScalar F>
MedialReport is_medial_basis(const Algebra<F>& a, const Tolerance& tol = {}) {
  const std::size_t n = a.dim();
  std::vector<std::vector<Vec<F>>> p(n, std::vector<Vec<F>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) p[i][j] = p[j][i] = mul(a, a.basis(i), a.basis(j));
  MedialReport r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = i; l < n; ++l)
          r.basis_quadruple_residual =
              std::max(r.basis_quadruple_residual, distance(mul(a, p[i][j], p[k][l]), mul(a, p[i][k], p[j][l])));
  r.verdict = r.basis_quadruple_residual <= (FieldOps<F>::exact ? 0.0 : tol.eq_tol);
  return r;
}

/// max over random pairs of ||(xy)^2 - x^2 y^2|| / max(1, |x|^2 |y|^2).
template <FieldScalar F>
double squared_identity_check(const Algebra<F>& a, std::size_t samples = 50, std::uint64_t seed = kDefaultSeed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<F> x = random_element(a, rng);
    const Vec<F> y = random_element(a, rng);
    const Vec<F> xy = mul(a, x, y);
    const double d = distance(mul(a, xy, xy), mul(a, mul(a, x, x), mul(a, y, y)));
    if constexpr (FieldOps<F>::exact) worst = std::max(worst, d);
    else worst = std::max(worst, d / std::max(1.0, norm(x) * norm(x) * norm(y) * norm(y)));
  }
  return worst;
}

/// Quadruple check plus the squared identity; verdict from the quadruples.
template <FieldScalar F>
MedialReport medial_report(const Algebra<F>& a, std::size_t samples = 50, std::uint64_t seed = kDefaultSeed,
                           const Tolerance& tol = {}) {
  MedialReport r = is_medial_basis(a, tol);
  r.squared_identity_residual = squared_identity_check(a, samples, seed);
  return r;
}

/// max over basis pairs of ||c(e_i e_j) - (c e_i)(c e_j)||.
template <FieldScalar F>
double endomorphism_check(const Algebra<F>& a, const Vec<F>& c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) {
      const Vec<F> ei = a.basis(i);
      const Vec<F> ej = a.basis(j);
      worst = std::max(worst, distance(mul(a, c, mul(a, ei, ej)), mul(a, mul(a, c, ei), mul(a, c, ej))));
    }
  return worst;
}

/// ||L_{c2} L_{c1} - L_{c2 c1} L_{c2}||.
template <FieldScalar F>
double conjugation_check(const Algebra<F>& a, const Vec<F>& c1, const Vec<F>& c2) {
  const Matrix<F> l1 = left_mul_matrix(a, c1);
  const Matrix<F> l2 = left_mul_matrix(a, c2);
  const Matrix<F> l21 = left_mul_matrix(a, mul(a, c2, c1));
  return norm(l2 * l1 - l21 * l2);
}

/// max over basis triples of ||(e_i e_j) e_k - e_i (e_j e_k)||.
template <FieldScalar F>
double associativity_residual(const Algebra<F>& a) {
  const std::size_t n = a.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Vec<F> ei = a.basis(i);
        const Vec<F> ej = a.basis(j);
        const Vec<F> ek = a.basis(k);
        worst = std::max(worst, distance(mul(a, mul(a, ei, ej), ek), mul(a, ei, mul(a, ej, ek))));
      }
  return worst;
}

/// max over basis vectors of ||u e_i - e_i||.
template <FieldScalar F>
double unit_residual(const Algebra<F>& a, const Vec<F>& u) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, distance(mul(a, u, a.basis(i)), a.basis(i)));
  return worst;
}

/// x o y = L_c^{-1}(xy). The result is checked to be unital with unit c and
/// associative on basis triples.
template <FieldScalar F>
Algebra<F> kaplansky_isotope(const Algebra<F>& a, const Vec<F>& c, double check_tol = 1e-10) {
  const Matrix<F> inv = inverse(left_mul_matrix(a, c), a.field(), 1e-12, ErrorCode::SingularLc);
  Algebra<F> iso = algebra_from_products<F>(
      a.field(), a.dim(), [&](std::size_t i, std::size_t j) { return inv * mul(a, a.basis(i), a.basis(j)); });
  const double tol = FieldOps<F>::exact ? 0.0 : check_tol;
  if (unit_residual(iso, c) > tol) throw Error(ErrorCode::AssociativityFailed, "c is not a unit of the isotope");
  const double r = associativity_residual(iso);
  if (r > tol) throw Error(ErrorCode::AssociativityFailed, "isotope is not associative (residual " + std::to_string(r) + ")");
  return iso;
}

/// phi(x) = det L_x / det L_c; max over random pairs of
/// |phi(xy) - phi(x) phi(y)| / max(1, |phi(x) phi(y)|).
inline double det_homomorphism_check(const Algebra<Complex>& a, const Vec<Complex>& c, std::size_t samples = 100,
                                     std::uint64_t seed = kDefaultSeed) {
  const Complex dc = determinant(left_mul_matrix(a, c), a.field());
  if (std::abs(dc) < 1e-12) throw Error(ErrorCode::SingularLc, "det L_c = 0");
  auto phi = [&](const Vec<Complex>& x) { return determinant(left_mul_matrix(a, x), a.field()) / dc; };
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<Complex> x = random_element(a, rng);
    const Vec<Complex> y = random_element(a, rng);
    const Complex px = phi(x);
    const Complex py = phi(y);
    worst = std::max(worst, std::abs(phi(mul(a, x, y)) - px * py) / std::max(1.0, std::abs(px * py)));
  }
  return worst;
}

/// det L_x / det L_c.
inline Complex determinant_ratio(const Algebra<Complex>& a, const Vec<Complex>& c, const Vec<Complex>& x) {
  const Complex dc = determinant(left_mul_matrix(a, c), a.field());
  if (std::abs(dc) < 1e-12) throw Error(ErrorCode::SingularLc, "det L_c = 0");
  return determinant(left_mul_matrix(a, x), a.field()) / dc;
}

/// det of the circulant X[i][j] = a[(j - i) mod n].
inline Complex circulant_determinant(const Vec<Complex>& coeffs) {
  const std::size_t n = coeffs.size();
  Matrix<Complex> x(n, n, Complex{});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = coeffs[(j + n - i) % n];
  return determinant(x, FieldDescriptor::complex());
}

struct GenericDeterminant {
  Complex product{};     // prod_k T(L_c^k x)
  Complex circulant{};   // det circ(a)
  double relative_gap = 0.0;
};

/// delta(x) two ways, in the cyclotomic eigenbasis u of c: the product of
/// generic traces T(L_c^k x), T(sum a_i u_i) = sum a_i, and the circulant
/// determinant of the coordinates a.
inline GenericDeterminant generic_determinant_parts(const Algebra<Complex>& a, const Vec<Complex>& c,
                                                    const Vec<Complex>& x, const Tolerance& tol = {}) {
  const Matrix<Complex> u = cyclotomic_eigenbasis(a, c, tol);
  const Matrix<Complex> uinv = inverse(u, a.field());
  auto trace = [&](const Vec<Complex>& v) {
    Complex s = 0.0;
    for (const auto& z : uinv * v) s += z;
    return s;
  };
  GenericDeterminant g;
  g.product = 1.0;
  Vec<Complex> lx = x;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    g.product *= trace(lx);
    lx = mul(a, c, lx);
  }
  g.circulant = circulant_determinant(uinv * x);
  g.relative_gap = std::abs(g.product - g.circulant) / std::max(1.0, std::abs(g.circulant));
  return g;
}

/// delta(x); asserts the product and circulant forms agree to relative 1e-10.
inline Complex generic_determinant(const Algebra<Complex>& a, const Vec<Complex>& c, const Vec<Complex>& x,
                                   const Tolerance& tol = {}) {
  const GenericDeterminant g = generic_determinant_parts(a, c, x, tol);
  if (g.relative_gap > 1e-10)
    throw Error(ErrorCode::NotIsospectral, "product and circulant forms disagree by " + std::to_string(g.relative_gap));
  return g.product;
}

/// max over random x of ||L_x^n - delta(x) I|| / (|delta(x)| + 1).
inline double verify_Lxn_identity(const Algebra<Complex>& a, const Vec<Complex>& c, std::size_t samples = 100,
                                  std::uint64_t seed = kDefaultSeed) {
  const std::size_t n = a.dim();
  const Matrix<Complex> id = Matrix<Complex>::identity(n, a.field());
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<Complex> x = random_element(a, rng);
    const Complex d = generic_determinant(a, c, x);
    const Matrix<Complex> lx = left_mul_matrix(a, x);
    Matrix<Complex> p = lx;
    for (std::size_t k = 1; k < n; ++k) p = lx * p;
    worst = std::max(worst, norm(p - id.scaled(d)) / (std::abs(d) + 1.0));
  }
  return worst;
}

struct BnReport {
  double power_residual = 0.0;           // ||x^{n+1} - delta(x) x|| / (|delta(x)| |x| + 1)
  double multiplicativity_residual = 0.0;  // |delta(xy) - delta(x) delta(y)| / max(1, |delta(x) delta(y)|)
};

inline BnReport verify_Bn(const Algebra<Complex>& a, const Vec<Complex>& c, std::size_t samples = 100,
                          std::uint64_t seed = kDefaultSeed) {
  const int n = static_cast<int>(a.dim());
  std::mt19937_64 rng(seed);
  BnReport r;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec<Complex> x = random_element(a, rng);
    const Vec<Complex> y = random_element(a, rng);
    const Complex dx = generic_determinant(a, c, x);
    const Complex dy = generic_determinant(a, c, y);
    const Vec<Complex> xn1 = principal_power(a, x, n + 1);
    r.power_residual = std::max(r.power_residual, distance(xn1, dx * x) / (std::abs(dx) * norm(x) + 1.0));
    const Complex dxy = generic_determinant(a, c, mul(a, x, y));
    r.multiplicativity_residual =
        std::max(r.multiplicativity_residual, std::abs(dxy - dx * dy) / std::max(1.0, std::abs(dx * dy)));
  }
  return r;
}

struct IdealCheck {
  bool ok = false;
  std::size_t kernel_dim = 0;
  double residual = 0.0;
};

/// K = ker L_c; checks e_i K is inside K for every basis vector.
template <FieldScalar F>
IdealCheck zero_eigenspace_ideal_check(const Algebra<F>& a, const Vec<F>& c, const Tolerance& tol = {}) {
  const auto k = kernel(left_mul_matrix(a, c), a.field(), tol.eq_tol);
  IdealCheck r;
  r.kernel_dim = k.size();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (const auto& v : k) r.residual = std::max(r.residual, residual_outside_span(k, mul(a, a.basis(i), v), a.field()));
  r.ok = r.residual <= (FieldOps<F>::exact ? 0.0 : tol.eq_tol);
  return r;
}

/// Every product of two idempotents is an idempotent (possibly zero); max residual.
template <FieldScalar F>
double idempotent_product_closure(const Algebra<F>& a, const IdempotentSet<F>& idm) {
  double worst = 0.0;
  for (std::size_t i = 0; i < idm.size(); ++i)
    for (std::size_t j = i; j < idm.size(); ++j)
      worst = std::max(worst, is_idempotent(a, mul(a, idm.elements[i], idm.elements[j])).residual);
  return worst;
}

}  // namespace nonassoc
