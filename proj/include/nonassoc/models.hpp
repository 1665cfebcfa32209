#pragma once

// Constructors for the concrete algebras: A2, A3, the cyclotomic model C_n,
// twisted doubles and powers, direct products, the algebra T, and medial
// extensions of idempotent quasigroups. Plus a few sampling helpers used by
// tests and the CLI.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "nonassoc/quasigroup.hpp"

namespace nonassoc {

/// The ground field as a 1-dimensional algebra, e * e = e.
template <FieldScalar F>
Algebra<F> build_field(const FieldDescriptor& fd) {
  return Algebra<F>(fd, 1, {FieldOps<F>::one(fd)});
}

/// Basis c1, c2 with c_i c_i = c_i and c1 c2 = -c1 - c2.
template <FieldScalar F>
Algebra<F> build_A2(const FieldDescriptor& fd) {
  const F one = FieldOps<F>::one(fd);
  const F zero = FieldOps<F>::zero(fd);
  // gamma[(i*2 + j)*2 + k]
  return Algebra<F>(fd, 2, {one, zero, -one, -one, -one, -one, zero, one}).with_tag({"A2", 2});
}

/// gamma = (1 + i sqrt 7)/4, the root of 2 g^2 - g + 1 = 0 with positive imaginary part.
inline Complex a3_gamma() { return {0.25, std::sqrt(7.0) / 4.0}; }

inline Algebra<Complex> build_A3() {
  const FieldDescriptor fd = FieldDescriptor::complex();
  const Complex g = a3_gamma();
  const std::vector<std::vector<Vec<Complex>>> prod = {
      {{1, 0, 0}, {g - 1.0, -g, g}, {-g, g, g - 1.0}},
      {{g - 1.0, -g, g}, {0, 1, 0}, {g, g - 1.0, -g}},
      {{-g, g, g - 1.0}, {g, g - 1.0, -g}, {0, 0, 1}},
  };
  return algebra_from_products<Complex>(fd, 3, [&](std::size_t i, std::size_t j) { return prod[i][j]; })
      .with_tag({"A3", 3});
}

/// c1..c7 of A3: the basis, c4 = -gamma (c1 + c2 + c3), c5 = c1c2, c6 = c2c3, c7 = c3c1.
inline std::vector<Vec<Complex>> a3_labeled_idempotents() {
  const Algebra<Complex> a = build_A3();
  const Complex g = a3_gamma();
  std::vector<Vec<Complex>> c = {a.basis(0), a.basis(1), a.basis(2), {-g, -g, -g}};
  c.push_back(mul(a, c[0], c[1]));
  c.push_back(mul(a, c[1], c[2]));
  c.push_back(mul(a, c[2], c[0]));
  return c;
}

/// C_n = F[z]/(z^n - 1) with z^i o z^j = eps^(i+j) z^((i+j) mod n).
template <FieldScalar F>
Algebra<F> build_Cn(int n, const FieldDescriptor& fd) {
  if (n < 2) throw Error(ErrorCode::Usage, "C_n needs n >= 2");
  (void)primitive_root_of_unity<F>(n, fd);  // NoRootOfUnity over F_p when n does not divide p - 1
  const auto un = static_cast<std::size_t>(n);
  return algebra_from_products<F>(fd, un,
                                  [&](std::size_t i, std::size_t j) {
                                    Vec<F> v = zeros<F>(un, fd);
                                    v[(i + j) % un] = root_power<F>(n, static_cast<std::int64_t>(i + j), fd);
                                    return v;
                                  })
      .with_tag({"Cn", n});
}

/// (x, y) o (z, w) = (xz + yw, zeta (xw + yz)) on A x A.
template <FieldScalar F>
Algebra<F> twisted_double(const Algebra<F>& a, const F& zeta) {
  const std::size_t m = a.dim();
  const auto& fd = a.field();
  return algebra_from_products<F>(fd, 2 * m, [&](std::size_t i, std::size_t j) {
    Vec<F> v = zeros<F>(2 * m, fd);
    const bool yi = i >= m;
    const bool yj = j >= m;
    const Vec<F> p = mul(a, a.basis(i % m), a.basis(j % m));
    const std::size_t off = (yi == yj) ? 0 : m;  // x*x and y*y land in the first block
    const F s = (yi == yj) ? FieldOps<F>::one(fd) : zeta;
    for (std::size_t k = 0; k < m; ++k) v[off + k] = s * p[k];
    return v;
  });
}

/// A^{x d}_zeta: polynomials of degree < d over A, p o q = p(zeta z) q(zeta z)
/// mod z^d - 1. Basis index i*dim(A) + a stands for e_a z^i.
template <FieldScalar F>
Algebra<F> twisted_power(const Algebra<F>& a, int d, const F& zeta) {
  if (d < 1) throw Error(ErrorCode::Usage, "twisted power needs d >= 1");
  const auto& fd = a.field();
  F zd = FieldOps<F>::one(fd);
  for (int i = 0; i < d; ++i) zd *= zeta;
  const F diff = zd - FieldOps<F>::one(fd);
  if (!FieldOps<F>::is_zero(diff, 1e-9)) throw Error(ErrorCode::NotARoot, "zeta^d != 1");
  const std::size_t m = a.dim();
  const auto ud = static_cast<std::size_t>(d);
  std::vector<F> zpow(2 * ud, FieldOps<F>::one(fd));
  for (std::size_t i = 1; i < zpow.size(); ++i) zpow[i] = zpow[i - 1] * zeta;
  return algebra_from_products<F>(fd, ud * m, [&](std::size_t s, std::size_t t) {
    const std::size_t i = s / m;
    const std::size_t j = t / m;
    const Vec<F> p = mul(a, a.basis(s % m), a.basis(t % m));
    Vec<F> v = zeros<F>(ud * m, fd);
    const std::size_t off = ((i + j) % ud) * m;
    for (std::size_t k = 0; k < m; ++k) v[off + k] = zpow[i + j] * p[k];
    return v;
  });
}

/// (a, x)(b, y) = (ab, xy).
template <FieldScalar F>
Algebra<F> direct_product(const Algebra<F>& a, const Algebra<F>& b) {
  if (!(a.field() == b.field())) throw Error(ErrorCode::FieldMismatch, a.field().name() + " vs " + b.field().name());
  const std::size_t m = a.dim();
  const std::size_t n = m + b.dim();
  return algebra_from_products<F>(a.field(), n, [&](std::size_t i, std::size_t j) {
    Vec<F> v = zeros<F>(n, a.field());
    if (i < m && j < m) {
      const Vec<F> p = mul(a, a.basis(i), a.basis(j));
      for (std::size_t k = 0; k < m; ++k) v[k] = p[k];
    } else if (i >= m && j >= m) {
      const Vec<F> p = mul(b, b.basis(i - m), b.basis(j - m));
      for (std::size_t k = 0; k < b.dim(); ++k) v[m + k] = p[k];
    }
    return v;
  });
}

/// T: (x o y)_i = x_i y_i - (x_j y_k + x_k y_j)/2 for {i, j, k} = {1, 2, 3}.
template <FieldScalar F = Complex>
Algebra<F> build_T(const FieldDescriptor& fd = FieldDescriptor::complex()) {
  const F h = half<F>(fd);
  const F one = FieldOps<F>::one(fd);
  return algebra_from_products<F>(fd, 3, [&](std::size_t i, std::size_t j) {
           Vec<F> v = zeros<F>(3, fd);
           if (i == j) {
             v[i] = one;
           } else {
             v[3 - i - j] = -h;  // e_j e_k contributes to coordinate i
           }
           return v;
         })
      .with_tag({"T", 3});
}

/// A real idempotent of T: the circle sum x_i^2 = sum x_i = 1 is centered at
/// (1/3, 1/3, 1/3) with radius sqrt(2/3) in the plane sum x_i = 1.
inline Vec<Complex> t_idempotent(double theta) {
  const double r = std::sqrt(2.0 / 3.0);
  const double u[3] = {1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0.0};
  const double v[3] = {1 / std::sqrt(6.0), 1 / std::sqrt(6.0), -2 / std::sqrt(6.0)};
  Vec<Complex> x(3);
  for (int i = 0; i < 3; ++i) x[static_cast<std::size_t>(i)] = 1.0 / 3.0 + r * (std::cos(theta) * u[i] + std::sin(theta) * v[i]);
  return x;
}

/// @p count idempotents of T at seeded random angles.
inline IdempotentSet<Complex> sample_T_idempotents(std::size_t count, std::uint64_t seed = kDefaultSeed) {
  const Algebra<Complex> t = build_T();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  IdempotentSet<Complex> s;
  s.method = EnumerationMethod::Newton;
  for (std::size_t i = 0; i < count; ++i) {
    s.elements.push_back(t_idempotent(ang(rng)));
    s.residuals.push_back(is_idempotent(t, s.elements.back()).residual);
  }
  return s;
}

/// N(x) = x1^3 + x2^3 + x3^3 - 3 x1 x2 x3.
inline Complex t_norm(const Vec<Complex>& x) {
  return x[0] * x[0] * x[0] + x[1] * x[1] * x[1] + x[2] * x[2] * x[2] - 3.0 * x[0] * x[1] * x[2];
}

/// Basis vectors multiply by the table with coefficient 1.
template <FieldScalar F>
Algebra<F> medial_extension(const QuasigroupTable& q, const FieldDescriptor& fd) {
  if (q.order() == 0 || !is_latin(q) || !is_idempotent_table(q) || !is_commutative_table(q) ||
      !is_medial_table(q).verdict)
    throw Error(ErrorCode::NotIMCQuasigroup, "table is not an idempotent medial commutative quasigroup");
  const std::size_t n = q.order();
  return algebra_from_products<F>(fd, n, [&](std::size_t i, std::size_t j) {
    Vec<F> v = zeros<F>(n, fd);
    v[q(i, j)] = FieldOps<F>::one(fd);
    return v;
  });
}

/// Symmetric tensor with i.i.d. complex Gaussian entries (upper triangle mirrored).
inline Algebra<Complex> random_symmetric_algebra(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const FieldDescriptor fd = FieldDescriptor::complex();
  std::vector<Complex> g(n * n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Complex v = FieldOps<Complex>::random(rng, fd);
        g[(i * n + j) * n + k] = v;
        g[(j * n + i) * n + k] = v;
      }
  return Algebra<Complex>(fd, n, std::move(g));
}

/// gamma + scale * noise, symmetrized.
inline Algebra<Complex> perturb(const Algebra<Complex>& a, double scale, std::uint64_t seed) {
  const Algebra<Complex> noise = random_symmetric_algebra(a.dim(), seed);
  std::vector<Complex> g = a.tensor();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += scale * noise.tensor()[i];
  return Algebra<Complex>(a.field(), a.dim(), std::move(g));
}

/// Delta(p) = p(1) p(eps) ... p(eps^(n-1)) for p given by monomial coefficients.
inline Complex cyclotomic_delta(const Vec<Complex>& p) {
  const auto n = static_cast<std::int64_t>(p.size());
  const FieldDescriptor fd = FieldDescriptor::complex();
  Complex prod = 1.0;
  for (std::int64_t k = 0; k < n; ++k) {
    Complex v = 0.0;
    for (std::int64_t m = 0; m < n; ++m) v += p[static_cast<std::size_t>(m)] * root_power<Complex>(n, k * m, fd);
    prod *= v;
  }
  return prod;
}

}  // namespace nonassoc
