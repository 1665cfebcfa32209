#pragma once

// Small dense linear algebra over Complex and F_p. Matrices here are at most
// a few dozen rows, so everything is plain row-major storage. Numerically
// delicate steps over C (SVD null spaces, companion eigenvalues) go through
// Eigen; exact elimination over F_p is done by hand.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nonassoc/scalar.hpp"

namespace nonassoc {

template <FieldScalar F>
using Vec = std::vector<F>;

template <FieldScalar F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const F& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix zeros(std::size_t rows, std::size_t cols, const FieldDescriptor& fd) {
    return Matrix(rows, cols, FieldOps<F>::zero(fd));
  }
  static Matrix identity(std::size_t n, const FieldDescriptor& fd) {
    Matrix m = zeros(n, n, fd);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = FieldOps<F>::one(fd);
    return m;
  }
  /// Columns given as vectors.
  static Matrix from_columns(const std::vector<Vec<F>>& cols, std::size_t rows, const FieldDescriptor& fd) {
    Matrix m = zeros(rows, cols.size(), fd);
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<F> column(std::size_t j) const {
    Vec<F> v;
    v.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
    return v;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix r(rows_, o.cols_, F{});
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < o.cols_; ++j) {
        F acc = (*this)(i, 0) * o(0, j);
        for (std::size_t k = 1; k < cols_; ++k) acc += (*this)(i, k) * o(k, j);
        r(i, j) = acc;
      }
    return r;
  }
  Vec<F> operator*(const Vec<F>& v) const {
    Vec<F> r;
    r.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      F acc = (*this)(i, 0) * v[0];
      for (std::size_t k = 1; k < cols_; ++k) acc += (*this)(i, k) * v[k];
      r.push_back(acc);
    }
    return r;
  }
  Matrix operator+(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
    return r;
  }
  Matrix scaled(const F& s) const {
    Matrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
  }

  const std::vector<F>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

// ---- vector helpers -------------------------------------------------------

template <FieldScalar F>
Vec<F> zeros(std::size_t n, const FieldDescriptor& fd) {
  return Vec<F>(n, FieldOps<F>::zero(fd));
}

template <FieldScalar F>
Vec<F> basis_vector(std::size_t n, std::size_t i, const FieldDescriptor& fd) {
  Vec<F> v = zeros<F>(n, fd);
  v[i] = FieldOps<F>::one(fd);
  return v;
}

template <FieldScalar F>
Vec<F> operator+(Vec<F> a, const Vec<F>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
template <FieldScalar F>
Vec<F> operator-(Vec<F> a, const Vec<F>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
template <FieldScalar F>
Vec<F> operator*(const F& s, Vec<F> a) {
  for (auto& x : a) x *= s;
  return a;
}

/// Euclidean norm over C; number of nonzero entries over F_p (zero iff exact).
template <FieldScalar F>
double norm(const Vec<F>& v) {
  double acc = 0.0;
  if constexpr (FieldOps<F>::exact) {
    for (const auto& x : v) acc += x.is_zero() ? 0.0 : 1.0;
    return acc;
  } else {
    for (const auto& x : v) acc += std::norm(x);
    return std::sqrt(acc);
  }
}

template <FieldScalar F>
double distance(const Vec<F>& a, const Vec<F>& b) {
  return norm(a - b);
}

/// Frobenius norm (C) or nonzero count (F_p).
template <FieldScalar F>
double norm(const Matrix<F>& m) {
  return norm(m.data());
}

// ---- Eigen bridges (complex only) ----------------------------------------

inline Eigen::MatrixXcd to_eigen(const Matrix<Complex>& m) {
  Eigen::MatrixXcd r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

inline Matrix<Complex> from_eigen(const Eigen::MatrixXcd& m) {
  Matrix<Complex> r(m.rows(), m.cols(), Complex{});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

inline Eigen::VectorXcd to_eigen(const Vec<Complex>& v) {
  Eigen::VectorXcd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r(i) = v[i];
  return r;
}

inline Vec<Complex> from_eigen_vec(const Eigen::VectorXcd& v) {
  return Vec<Complex>(v.data(), v.data() + v.size());
}

// ---- elimination ----------------------------------------------------------

template <FieldScalar F>
struct Echelon {
  Matrix<F> reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column per nonzero row
};

/// Gauss-Jordan elimination. Over C a pivot counts as zero when |pivot| <= tol.
template <FieldScalar F>
Echelon<F> rref(Matrix<F> m, double tol = 1e-9) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t best = row;
    double best_mag = FieldOps<F>::magnitude(m(row, col));
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      const double mag = FieldOps<F>::magnitude(m(i, col));
      if (mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
    if (FieldOps<F>::is_zero(m(best, col), tol)) {
      if constexpr (!FieldOps<F>::exact)
        for (std::size_t i = row; i < m.rows(); ++i) m(i, col) = F{};
      continue;
    }
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(best, j));
    const F pivot_inv = [&] {
      if constexpr (FieldOps<F>::exact) return m(row, col).inverse();
      else return Complex(1.0, 0.0) / m(row, col);
    }();
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) *= pivot_inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      const F f = m(i, col);
      if (FieldOps<F>::is_zero(f, 0.0)) continue;
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <FieldScalar F>
std::size_t rank(const Matrix<F>& m, double tol = 1e-9) {
  if constexpr (FieldOps<F>::exact) {
    return rref(m).pivots.size();
  } else {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
    const auto& s = svd.singularValues();
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol) ++r;
    return r;
  }
}

template <FieldScalar F>
F determinant(const Matrix<F>& m, const FieldDescriptor& fd) {
  if constexpr (FieldOps<F>::exact) {
    Matrix<F> a = m;
    const std::size_t n = a.rows();
    F det = FieldOps<F>::one(fd);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t p = col;
      while (p < n && a(p, col).is_zero()) ++p;
      if (p == n) return FieldOps<F>::zero(fd);
      if (p != col) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(col, j));
        det = -det;
      }
      det *= a(col, col);
      const F inv = a(col, col).inverse();
      for (std::size_t i = col + 1; i < n; ++i) {
        const F f = a(i, col) * inv;
        if (f.is_zero()) continue;
        for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      }
    }
    return det;
  } else {
    if (m.rows() == 0) return {1.0, 0.0};
    return to_eigen(m).partialPivLu().determinant();
  }
}

/// Inverse; throws SingularMatrix (or the supplied code) when not invertible.
template <FieldScalar F>
Matrix<F> inverse(const Matrix<F>& m, const FieldDescriptor& fd, double tol = 1e-12,
                  ErrorCode code = ErrorCode::SingularMatrix) {
  const std::size_t n = m.rows();
  if constexpr (FieldOps<F>::exact) {
    Matrix<F> aug = Matrix<F>::zeros(n, 2 * n, fd);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
      aug(i, n + i) = FieldOps<F>::one(fd);
    }
    auto e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw Error(code, "matrix is singular");
    Matrix<F> r = Matrix<F>::zeros(n, n, fd);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) = e.reduced(i, n + j);
    return r;
  } else {
    const Eigen::MatrixXcd a = to_eigen(m);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& s = svd.singularValues();
    if (n > 0 && s(s.size() - 1) <= tol * std::max(1.0, s(0)))
      throw Error(code, "matrix is numerically singular");
    return from_eigen(a.fullPivLu().inverse());
  }
}

/// Solve m * x = b for square invertible m.
template <FieldScalar F>
Vec<F> solve(const Matrix<F>& m, const Vec<F>& b, const FieldDescriptor& fd) {
  if constexpr (FieldOps<F>::exact) {
    return inverse(m, fd) * b;
  } else {
    return from_eigen_vec(to_eigen(m).fullPivLu().solve(to_eigen(b)));
  }
}

/// Null-space basis: orthonormal via SVD over C (singular values <= tol count
/// as zero), reduced-echelon over F_p.
template <FieldScalar F>
std::vector<Vec<F>> kernel(const Matrix<F>& m, const FieldDescriptor& fd, double tol = 1e-9) {
  const std::size_t n = m.cols();
  std::vector<Vec<F>> out;
  if constexpr (FieldOps<F>::exact) {
    auto e = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    for (std::size_t free = 0; free < n; ++free) {
      if (is_pivot[free]) continue;
      Vec<F> v = zeros<F>(n, fd);
      v[free] = FieldOps<F>::one(fd);
      for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
      out.push_back(std::move(v));
    }
  } else {
    if (m.rows() == 0) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(basis_vector<F>(n, i, fd));
      return out;
    }
    Eigen::MatrixXcd a = to_eigen(m);
    // Pad to square so that V is n x n and singular values cover every column.
    if (a.rows() < a.cols()) {
      Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(a.cols(), a.cols());
      padded.topRows(a.rows()) = a;
      a = padded;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      if (s(i) <= tol) out.push_back(from_eigen_vec(svd.matrixV().col(i)));
    }
  }
  return out;
}

// ---- characteristic polynomial ---------------------------------------------

/// Coefficients of det(tI - m), ascending, via a Hessenberg reduction. Works
/// over any field; used over F_p when Faddeev-LeVerrier would divide by p.
template <FieldScalar F>
Vec<F> charpoly_hessenberg(Matrix<F> h, const FieldDescriptor& fd) {
  const std::size_t n = h.rows();
  const F zero = FieldOps<F>::zero(fd);
  const F one = FieldOps<F>::one(fd);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    std::size_t i = m;
    while (i < n && FieldOps<F>::is_zero(h(i, m - 1), 0.0)) ++i;
    if (i == n) continue;
    if (i != m) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(i, j), h(m, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(h(j, i), h(j, m));
    }
    const F pivot_inv = one / h(m, m - 1);
    for (std::size_t j = m + 1; j < n; ++j) {
      const F u = h(j, m - 1) * pivot_inv;
      if (FieldOps<F>::is_zero(u, 0.0)) continue;
      for (std::size_t k = 0; k < n; ++k) h(j, k) -= u * h(m, k);
      for (std::size_t k = 0; k < n; ++k) h(k, m) += u * h(k, j);
    }
  }
  // p[m] = char poly of the leading m x m block, as ascending coefficients.
  std::vector<Vec<F>> p(n + 1);
  p[0] = Vec<F>{one};
  for (std::size_t m = 0; m < n; ++m) {
    Vec<F> next(m + 2, zero);
    for (std::size_t k = 0; k <= m; ++k) {
      next[k + 1] += p[m][k];
      next[k] -= h(m, m) * p[m][k];
    }
    F prod = one;
    for (std::size_t ii = m; ii-- > 0;) {
      prod *= h(ii + 1, ii);
      const F coef = prod * h(ii, m);
      for (std::size_t k = 0; k < p[ii].size(); ++k) next[k] -= coef * p[ii][k];
    }
    p[m + 1] = std::move(next);
  }
  return p[n];
}

/// Coefficients of det(m - tI) in ascending powers of t, degree exactly n.
/// Faddeev-LeVerrier; over F_p with n >= p it falls back to Hessenberg.
template <FieldScalar F>
Vec<F> char_poly(const Matrix<F>& m, const FieldDescriptor& fd) {
  const std::size_t n = m.rows();
  const F zero = FieldOps<F>::zero(fd);
  const F one = FieldOps<F>::one(fd);
  Vec<F> c(n + 1, zero);  // det(tI - m)
  bool use_fl = true;
  if constexpr (FieldOps<F>::exact) use_fl = n < fd.p();
  if (use_fl) {
    c[n] = one;
    Matrix<F> mk = Matrix<F>::zeros(n, n, fd);
    const Matrix<F> id = Matrix<F>::identity(n, fd);
    for (std::size_t k = 1; k <= n; ++k) {
      mk = m * mk + id.scaled(c[n - k + 1]);
      const Matrix<F> am = m * mk;
      F tr = zero;
      for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
      c[n - k] = -tr / FieldOps<F>::from_int(static_cast<std::int64_t>(k), fd);
    }
  } else {
    c = charpoly_hessenberg(m, fd);
  }
  if (n % 2 == 1)
    for (auto& x : c) x = -x;
  return c;
}

/// Horner evaluation of ascending coefficients.
template <FieldScalar F>
F poly_eval(const Vec<F>& coeffs, const F& t) {
  F acc = coeffs.back();
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

/// Resultant Res(f, g) of two polynomials (ascending coefficients, formal
/// degrees size()-1) via the Sylvester determinant.
template <FieldScalar F>
F resultant(const Vec<F>& f, const Vec<F>& g, const FieldDescriptor& fd) {
  const std::size_t df = f.size() - 1;
  const std::size_t dg = g.size() - 1;
  const std::size_t s = df + dg;
  if (s == 0) return FieldOps<F>::one(fd);
  Matrix<F> syl = Matrix<F>::zeros(s, s, fd);
  for (std::size_t r = 0; r < dg; ++r)
    for (std::size_t k = 0; k <= df; ++k) syl(r, r + k) = f[df - k];
  for (std::size_t r = 0; r < df; ++r)
    for (std::size_t k = 0; k <= dg; ++k) syl(dg + r, r + k) = g[dg - k];
  return determinant(syl, fd);
}

}  // namespace nonassoc
