#pragma once

/**
 * @file algebra.hpp
 * @brief Finite-dimensional commutative algebras given by structure constants.
 *
 * An algebra of dimension n stores the dense tensor gamma with
 * e_i * e_j = sum_k gamma[i][j][k] e_k. Elements are plain coefficient
 * vectors; every operation checks that lengths agree with the algebra.
 */

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonassoc/linalg.hpp"

namespace nonassoc {

/// Provenance tag for algebras built by a known constructor.
struct ModelTag {
  std::string name;
  int n = 0;
  friend bool operator==(const ModelTag&, const ModelTag&) = default;
};

template <FieldScalar F>
class Algebra {
 public:
  Algebra() = default;

  /// @p gamma is flat, index (i*n + j)*n + k. Construction fails with
  /// NonCommutative unless gamma[i][j][k] == gamma[j][i][k] (within
  /// @p sym_tol over C; the tensor is then symmetrized exactly).
  Algebra(FieldDescriptor fd, std::size_t dim, std::vector<F> gamma, double sym_tol = 1e-9)
      : fd_(fd), dim_(dim), gamma_(std::move(gamma)) {
    FieldOps<F>::check(fd_);
    if (dim_ == 0) throw Error(ErrorCode::DimensionMismatch, "algebra dimension must be >= 1");
    if (gamma_.size() != dim_ * dim_ * dim_)
      throw Error(ErrorCode::DimensionMismatch, "structure tensor must have n^3 entries");
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) {
          F& a = gamma_[index(i, j, k)];
          F& b = gamma_[index(j, i, k)];
          if (FieldOps<F>::magnitude(a - b) > sym_tol || (FieldOps<F>::exact && !(a == b)))
            throw Error(ErrorCode::NonCommutative,
                        "gamma[" + std::to_string(i) + "][" + std::to_string(j) + "][" +
                            std::to_string(k) + "] != gamma[" + std::to_string(j) + "][" +
                            std::to_string(i) + "][" + std::to_string(k) + "]");
          if constexpr (!FieldOps<F>::exact) {
            const F avg = 0.5 * (a + b);
            a = avg;
            b = avg;
          }
        }
  }

  const FieldDescriptor& field() const { return fd_; }
  std::size_t dim() const { return dim_; }
  const F& gamma(std::size_t i, std::size_t j, std::size_t k) const { return gamma_[index(i, j, k)]; }
  const std::vector<F>& tensor() const { return gamma_; }

  const std::optional<ModelTag>& tag() const { return tag_; }
  Algebra& with_tag(ModelTag t) {
    tag_ = std::move(t);
    return *this;
  }

  F zero_scalar() const { return FieldOps<F>::zero(fd_); }
  F one_scalar() const { return FieldOps<F>::one(fd_); }
  Vec<F> zero() const { return zeros<F>(dim_, fd_); }
  Vec<F> basis(std::size_t i) const { return basis_vector<F>(dim_, i, fd_); }

  void check_element(const Vec<F>& x) const {
    if (x.size() != dim_)
      throw Error(ErrorCode::AlgebraMismatch,
                  "element of length " + std::to_string(x.size()) + " in algebra of dimension " +
                      std::to_string(dim_));
  }

 private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * dim_ + j) * dim_ + k; }

  FieldDescriptor fd_;
  std::size_t dim_ = 0;
  std::vector<F> gamma_;
  std::optional<ModelTag> tag_;
};

/// Builds an algebra from a callback giving e_i * e_j as a vector.
template <FieldScalar F, class ProductFn>
Algebra<F> algebra_from_products(const FieldDescriptor& fd, std::size_t n, ProductFn&& prod,
                                 double sym_tol = 1e-9) {
  std::vector<F> g(n * n * n, FieldOps<F>::zero(fd));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Vec<F> v = prod(i, j);
      for (std::size_t k = 0; k < n; ++k) g[(i * n + j) * n + k] = v[k];
    }
  return Algebra<F>(fd, n, std::move(g), sym_tol);
}

template <FieldScalar F>
Vec<F> mul(const Algebra<F>& a, const Vec<F>& x, const Vec<F>& y) {
  a.check_element(x);
  a.check_element(y);
  const std::size_t n = a.dim();
  Vec<F> out = a.zero();
  for (std::size_t i = 0; i < n; ++i) {
    if (FieldOps<F>::is_zero(x[i], 0.0)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (FieldOps<F>::is_zero(y[j], 0.0)) continue;
      const F xy = x[i] * y[j];
      for (std::size_t k = 0; k < n; ++k) out[k] += xy * a.gamma(i, j, k);
    }
  }
  return out;
}

/// Matrix of L_x : y -> x*y, with L[k][j] = sum_i x_i gamma[i][j][k].
template <FieldScalar F>
Matrix<F> left_mul_matrix(const Algebra<F>& a, const Vec<F>& x) {
  a.check_element(x);
  const std::size_t n = a.dim();
  Matrix<F> m = Matrix<F>::zeros(n, n, a.field());
  for (std::size_t i = 0; i < n; ++i) {
    if (FieldOps<F>::is_zero(x[i], 0.0)) continue;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) m(k, j) += x[i] * a.gamma(i, j, k);
  }
  return m;
}

/// Left-nested power: x^1 = x, x^(m+1) = x * x^m.
template <FieldScalar F>
Vec<F> principal_power(const Algebra<F>& a, const Vec<F>& x, int m) {
  if (m < 1) throw Error(ErrorCode::Usage, "principal power exponent must be >= 1");
  Vec<F> p = x;
  for (int k = 1; k < m; ++k) p = mul(a, x, p);
  return p;
}

struct IdempotencyCheck {
  bool ok = false;
  double residual = 0.0;
};

template <FieldScalar F>
IdempotencyCheck is_idempotent(const Algebra<F>& a, const Vec<F>& x, const Tolerance& tol = {}) {
  const double r = distance(mul(a, x, x), x);
  return {r <= (FieldOps<F>::exact ? 0.0 : tol.eq_tol), r};
}

template <FieldScalar F>
bool is_2nilpotent(const Algebra<F>& a, const Vec<F>& x, const Tolerance& tol = {}) {
  const double nx = norm(x);
  if (nx == 0.0) throw Error(ErrorCode::ZeroInput, "2-nilpotency is tested on nonzero elements");
  const double r = norm(mul(a, x, x));
  if constexpr (FieldOps<F>::exact) return r == 0.0;
  else return r <= tol.eq_tol * nx * nx;
}

// ---- spectra ----------------------------------------------------------------

struct EigenPair {
  Complex value;
  std::size_t multiplicity = 1;        // algebraic
  std::vector<Vec<Complex>> vectors;   // eigenspace basis (geometric multiplicity = size)
};

/// Angle in [0, 2pi) with values within 1e-9 of 2pi folded onto 0.
inline double spectral_angle(const Complex& z) {
  double a = std::arg(z);
  if (a < 0) a += 2.0 * std::numbers::pi;
  if (a > 2.0 * std::numbers::pi - 1e-9 || std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z))) {
    if (z.real() >= 0) a = 0.0;
  }
  return a;
}

inline bool spectral_less(const Complex& a, const Complex& b) {
  const double ta = spectral_angle(a);
  const double tb = spectral_angle(b);
  if (std::abs(ta - tb) > 1e-9) return ta < tb;
  return std::abs(a) < std::abs(b);
}

/// Roots of a polynomial (ascending coefficients, nonzero leading term) from
/// the eigenvalues of its companion matrix.
inline std::vector<Complex> polynomial_roots(const Vec<Complex>& coeffs) {
  const std::size_t n = coeffs.size() - 1;
  if (n == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  const Complex lead = coeffs[n];
  for (std::size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(i, n - 1) = -coeffs[i] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  // One Newton polish per root; harmless for clustered roots, sharpens simple ones.
  for (auto& r : roots) {
    Complex p = coeffs[n];
    Complex dp = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      dp = dp * r + p;
      p = p * r + coeffs[i];
    }
    if (std::abs(dp) > 1e-6) {
      const Complex step = p / dp;
      if (std::abs(step) < 1e-8) r -= step;
    }
  }
  return roots;
}

/// Eigenvalues with multiplicity and eigenspace bases of a complex matrix.
/// Eigenvalues come from the characteristic polynomial (companion QR). Roots
/// are clustered by single linkage at @p cluster_tol (relative to max(1, |root|)),
/// since an m-fold root comes back spread by about eps^(1/m); each cluster is
/// represented by its mean.
inline std::vector<EigenPair> eigen(const Matrix<Complex>& l, double cluster_tol = 1e-4) {
  const std::size_t n = l.rows();
  const FieldDescriptor fd = FieldDescriptor::complex();
  const auto roots = polynomial_roots(char_poly(l, fd));
  std::vector<std::size_t> label(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j)
        if (label[i] != label[j] &&
            std::abs(roots[i] - roots[j]) <= cluster_tol * std::max(1.0, std::abs(roots[i]))) {
          const std::size_t lo = std::min(label[i], label[j]);
          label[i] = label[j] = lo;
          changed = true;
        }
  }
  std::vector<std::vector<Complex>> clusters;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (label[i] != i) continue;
    clusters.emplace_back();
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (label[j] == i) clusters.back().push_back(roots[j]);
  }
  const double scale = std::max(1.0, norm(l));
  std::vector<EigenPair> out;
  for (const auto& c : clusters) {
    Complex mean = 0.0;
    for (const auto& r : c) mean += r;
    mean /= static_cast<double>(c.size());
    Matrix<Complex> shifted = l;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= mean;
    // Simple roots: the smallest singular vector. Clusters: a looser threshold,
    // since the mean of a multiple root is only accurate to ~sqrt(machine eps).
    auto vecs = kernel(shifted, fd, (c.size() == 1 ? 1e-8 : 1e-6) * scale);
    if (vecs.empty()) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(shifted), Eigen::ComputeFullV);
      vecs.push_back(from_eigen_vec(svd.matrixV().col(static_cast<Eigen::Index>(n) - 1)));
    }
    out.push_back({mean, c.size(), std::move(vecs)});
  }
  std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
    return spectral_less(a.value, b.value);
  });
  return out;
}

/// Eigen is complex-only; a prime-field matrix is a usage error.
inline std::vector<EigenPair> eigen(const Matrix<Fp>&) {
  throw Error(ErrorCode::PrimeFieldUnsupported, "use prime_eigen over F_p");
}

struct PrimeSpectrum {
  std::vector<std::pair<Fp, std::size_t>> roots;  // (eigenvalue, algebraic multiplicity)
  bool split = false;
};

/// Roots of the characteristic polynomial over F_p by exhaustive trial, with
/// multiplicities from repeated synthetic division.
inline PrimeSpectrum prime_eigen(const Matrix<Fp>& l, const FieldDescriptor& fd) {
  FieldOps<Fp>::check(fd);
  Vec<Fp> poly = char_poly(l, fd);
  PrimeSpectrum out;
  std::size_t total = 0;
  for (std::uint32_t v = 0; v < fd.p(); ++v) {
    const Fp t(v, fd.p());
    std::size_t mult = 0;
    while (poly.size() > 1 && poly_eval(poly, t).is_zero()) {
      // Divide by (x - t): synthetic division on descending coefficients.
      const std::size_t d = poly.size() - 1;
      Vec<Fp> q(d, Fp(0, fd.p()));
      Fp carry = poly[d];
      for (std::size_t i = d; i-- > 0;) {
        q[i] = carry;
        carry = poly[i] + carry * t;
      }
      poly = std::move(q);
      ++mult;
    }
    if (mult > 0) {
      out.roots.emplace_back(t, mult);
      total += mult;
    }
  }
  out.split = total == l.rows();
  return out;
}

/// Null space of a multiplication operator; see linalg kernel().
template <FieldScalar F>
std::vector<Vec<F>> kernel(const Matrix<F>& l, const FieldDescriptor& fd, const Tolerance& tol) {
  return kernel(l, fd, tol.eq_tol);
}

// ---- quotients ----------------------------------------------------------------

template <FieldScalar F>
struct Quotient {
  Algebra<F> algebra;
  Matrix<F> projection;                 // (n - r) x n, coordinates in the quotient
  std::vector<std::size_t> complement;  // standard basis indices spanning the complement
};

/// Residual of v outside span(basis): over C the distance to the least-squares
/// projection, over F_p 0/1 by rank.
template <FieldScalar F>
double residual_outside_span(const std::vector<Vec<F>>& basis, const Vec<F>& v, const FieldDescriptor& fd,
                             double tol = 1e-9) {
  if (basis.empty()) return norm(v);
  const std::size_t n = v.size();
  if constexpr (FieldOps<F>::exact) {
    Matrix<F> m = Matrix<F>::from_columns(basis, n, fd);
    std::vector<Vec<F>> ext = basis;
    ext.push_back(v);
    Matrix<F> m2 = Matrix<F>::from_columns(ext, n, fd);
    return rank(m2) > rank(m) ? 1.0 : 0.0;
  } else {
    (void)tol;
    Eigen::MatrixXcd m = to_eigen(Matrix<Complex>::from_columns(basis, n, fd));
    Eigen::VectorXcd b = to_eigen(v);
    Eigen::VectorXcd coef = m.completeOrthogonalDecomposition().solve(b);
    return (m * coef - b).norm();
  }
}

/// Quotient by the ideal spanned by @p ideal_basis. The complement is spanned
/// by the standard basis vectors at non-pivot columns of the echelon form of
/// the ideal's row matrix.
template <FieldScalar F>
Quotient<F> quotient(const Algebra<F>& a, const std::vector<Vec<F>>& ideal_basis, const Tolerance& tol = {}) {
  const std::size_t n = a.dim();
  const auto& fd = a.field();
  for (const auto& v : ideal_basis) a.check_element(v);

  // Independent spanning set for the ideal.
  std::vector<Vec<F>> span;
  std::vector<std::size_t> pivots;
  if (!ideal_basis.empty()) {
    Matrix<F> rows = Matrix<F>::zeros(ideal_basis.size(), n, fd);
    for (std::size_t r = 0; r < ideal_basis.size(); ++r)
      for (std::size_t k = 0; k < n; ++k) rows(r, k) = ideal_basis[r][k];
    auto e = rref(rows, tol.eq_tol);
    pivots = e.pivots;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      Vec<F> v = a.zero();
      for (std::size_t k = 0; k < n; ++k) v[k] = e.reduced(r, k);
      span.push_back(std::move(v));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& v : span) {
      const Vec<F> p = mul(a, a.basis(i), v);
      const double r = residual_outside_span(span, p, fd);
      if (r > (FieldOps<F>::exact ? 0.0 : tol.eq_tol * std::max(1.0, norm(p))))
        throw Error(ErrorCode::NotAnIdeal,
                    "e_" + std::to_string(i) + " times an ideal vector leaves the span (residual " +
                        std::to_string(r) + ")");
    }

  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> complement;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_pivot[i]) complement.push_back(i);

  // Change of basis [span | complement] and its inverse.
  std::vector<Vec<F>> cols = span;
  for (auto c : complement) cols.push_back(a.basis(c));
  const Matrix<F> full_inv = inverse(Matrix<F>::from_columns(cols, n, fd), fd);
  const std::size_t r = span.size();
  const std::size_t q = complement.size();
  Matrix<F> proj = Matrix<F>::zeros(q, n, fd);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t k = 0; k < n; ++k) proj(i, k) = full_inv(r + i, k);

  if (q == 0) throw Error(ErrorCode::DimensionMismatch, "quotient by the whole algebra is zero-dimensional");
  auto qa = algebra_from_products<F>(fd, q, [&](std::size_t i, std::size_t j) {
    return proj * mul(a, a.basis(complement[i]), a.basis(complement[j]));
  });
  return {std::move(qa), std::move(proj), std::move(complement)};
}

/// Random element with i.i.d. standard complex Gaussian (C) or uniform (F_p) coordinates.
template <FieldScalar F, class Rng>
Vec<F> random_element(const Algebra<F>& a, Rng& rng) {
  Vec<F> v;
  v.reserve(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) v.push_back(FieldOps<F>::random(rng, a.field()));
  return v;
}

/// Structure tensor of @p a in the basis given by the columns of @p basis.
template <FieldScalar F>
Algebra<F> change_basis(const Algebra<F>& a, const Matrix<F>& basis, double sym_tol = 1e-9) {
  const Matrix<F> inv = inverse(basis, a.field());
  const std::size_t n = a.dim();
  return algebra_from_products<F>(
      a.field(), n,
      [&](std::size_t i, std::size_t j) { return inv * mul(a, basis.column(i), basis.column(j)); }, sym_tol);
}

}  // namespace nonassoc
