#pragma once

/**
 * @file scalar.hpp
 * @brief Ground fields: double-precision complex numbers and prime fields F_p.
 *
 * Every algebra in the library is parameterized by one of the two scalar
 * types below. `Complex` comparisons are tolerance based; `Fp` arithmetic is
 * exact. A runtime `FieldDescriptor` travels with each algebra so that
 * prime-field zeros and ones can be materialized with the right modulus.
 */

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace nonassoc {

enum class ErrorCode {
  InvalidField,
  NoRootOfUnity,
  FieldMismatch,
  AlgebraMismatch,
  NonCommutative,
  PrimeFieldUnsupported,
  ZeroInput,
  NotAnIdeal,
  NotARoot,
  NotIMCQuasigroup,
  SingularJacobian,
  SearchSpaceTooLarge,
  IncompleteSet,
  HalfEigenvalue,
  DegreeTooHigh,
  NotAnIdempotent,
  NotSimpleSpectrum,
  NotReduced,
  ProjectionLeakage,
  NotMedialIsospectral,
  DimensionMismatch,
  NotProportional,
  SingularLc,
  AssociativityFailed,
  NotIsospectral,
  ProductEscapes,
  ClosureFailure,
  NotCyclic,
  EvenOrder,
  SingularMatrix,
  ParseError,
  Usage,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::NoRootOfUnity: return "NoRootOfUnity";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorCode::NonCommutative: return "NonCommutative";
    case ErrorCode::PrimeFieldUnsupported: return "PrimeFieldUnsupported";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NotAnIdeal: return "NotAnIdeal";
    case ErrorCode::NotARoot: return "NotARoot";
    case ErrorCode::NotIMCQuasigroup: return "NotIMCQuasigroup";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorCode::IncompleteSet: return "IncompleteSet";
    case ErrorCode::HalfEigenvalue: return "HalfEigenvalue";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::NotAnIdempotent: return "NotAnIdempotent";
    case ErrorCode::NotSimpleSpectrum: return "NotSimpleSpectrum";
    case ErrorCode::NotReduced: return "NotReduced";
    case ErrorCode::ProjectionLeakage: return "ProjectionLeakage";
    case ErrorCode::NotMedialIsospectral: return "NotMedialIsospectral";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotProportional: return "NotProportional";
    case ErrorCode::SingularLc: return "SingularLc";
    case ErrorCode::AssociativityFailed: return "AssociativityFailed";
    case ErrorCode::NotIsospectral: return "NotIsospectral";
    case ErrorCode::ProductEscapes: return "ProductEscapes";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::NotCyclic: return "NotCyclic";
    case ErrorCode::EvenOrder: return "EvenOrder";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

/// Library error carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using Complex = std::complex<double>;

struct Tolerance {
  double eq_tol = 1e-9;
  double newton_tol = 1e-12;
  double dedupe_tol = 1e-6;

  bool valid() const {
    return newton_tol > 0 && newton_tol <= dedupe_tol && eq_tol > 0;
  }
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

enum class FieldKind { Complex, Prime };

class FieldDescriptor {
 public:
  FieldDescriptor() = default;

  static FieldDescriptor complex() { return FieldDescriptor{}; }

  static FieldDescriptor prime(std::uint32_t p) {
    if (!is_prime(p) || p < 5)
      throw Error(ErrorCode::InvalidField,
                  "prime field requires a prime p >= 5, got " + std::to_string(p));
    FieldDescriptor fd;
    fd.kind_ = FieldKind::Prime;
    fd.p_ = p;
    return fd;
  }

  FieldKind kind() const { return kind_; }
  bool is_complex() const { return kind_ == FieldKind::Complex; }
  bool is_prime_field() const { return kind_ == FieldKind::Prime; }
  std::uint32_t p() const { return p_; }

  std::string name() const {
    return is_complex() ? std::string("C") : "F_" + std::to_string(p_);
  }

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;

 private:
  FieldKind kind_ = FieldKind::Complex;
  std::uint32_t p_ = 0;
};

/// Residue modulo a prime, always stored reduced.
class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t v, std::uint32_t p) : p_(p) {
    if (p == 0) return;
    const auto m = static_cast<std::int64_t>(p);
    v %= m;
    if (v < 0) v += m;
    v_ = static_cast<std::uint32_t>(v);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  Fp operator+(const Fp& o) const { return {static_cast<std::int64_t>(v_) + o.v_, common(o)}; }
  Fp operator-(const Fp& o) const {
    return {static_cast<std::int64_t>(v_) - static_cast<std::int64_t>(o.v_), common(o)};
  }
  Fp operator*(const Fp& o) const {
    const std::uint32_t p = common(o);
    return {static_cast<std::int64_t>((static_cast<std::uint64_t>(v_) * o.v_) % p), p};
  }
  Fp operator/(const Fp& o) const { return *this * o.inverse(); }
  Fp operator-() const { return {-static_cast<std::int64_t>(v_), p_}; }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  Fp pow(std::uint64_t e) const {
    Fp base = *this;
    Fp acc(1, p_);
    while (e) {
      if (e & 1U) acc *= base;
      base *= base;
      e >>= 1U;
    }
    return acc;
  }

  Fp inverse() const {
    if (v_ == 0) throw Error(ErrorCode::SingularMatrix, "inverse of zero in F_" + std::to_string(p_));
    return pow(p_ - 2);
  }

  friend bool operator==(const Fp& a, const Fp& b) {
    (void)a.common(b);
    return a.v_ == b.v_;
  }

 private:
  std::uint32_t common(const Fp& o) const {
    if (p_ == o.p_) return p_;
    // An unset modulus only arises for value-initialized zeros.
    if (p_ == 0 && v_ == 0) return o.p_;
    if (o.p_ == 0 && o.v_ == 0) return p_;
    throw Error(ErrorCode::FieldMismatch, "F_" + std::to_string(p_) + " vs F_" + std::to_string(o.p_));
  }

  std::uint32_t v_ = 0;
  std::uint32_t p_ = 0;
};

template <class F>
concept FieldScalar = std::same_as<F, Complex> || std::same_as<F, Fp>;

/// Per-field constants and the notion of "size" used for residuals.
template <FieldScalar F>
struct FieldOps;

template <>
struct FieldOps<Complex> {
  static constexpr bool exact = false;
  static Complex zero(const FieldDescriptor&) { return {0.0, 0.0}; }
  static Complex one(const FieldDescriptor&) { return {1.0, 0.0}; }
  static Complex from_int(std::int64_t v, const FieldDescriptor&) { return {static_cast<double>(v), 0.0}; }
  static double magnitude(const Complex& c) { return std::abs(c); }
  static bool is_zero(const Complex& c, double tol) { return std::abs(c) <= tol; }
  template <class Rng>
  static Complex random(Rng& rng, const FieldDescriptor&) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    const double im = g(rng);
    return {re, im};
  }
  static void check(const FieldDescriptor& fd) {
    if (!fd.is_complex()) throw Error(ErrorCode::FieldMismatch, "expected the complex field");
  }
};

template <>
struct FieldOps<Fp> {
  static constexpr bool exact = true;
  static Fp zero(const FieldDescriptor& fd) { return {0, fd.p()}; }
  static Fp one(const FieldDescriptor& fd) { return {1, fd.p()}; }
  static Fp from_int(std::int64_t v, const FieldDescriptor& fd) { return {v, fd.p()}; }
  static double magnitude(const Fp& c) { return c.is_zero() ? 0.0 : 1.0; }
  static bool is_zero(const Fp& c, double) { return c.is_zero(); }
  template <class Rng>
  static Fp random(Rng& rng, const FieldDescriptor& fd) {
    std::uniform_int_distribution<std::uint32_t> u(0, fd.p() - 1);
    return {u(rng), fd.p()};
  }
  static void check(const FieldDescriptor& fd) {
    if (!fd.is_prime_field()) throw Error(ErrorCode::FieldMismatch, "expected a prime field");
  }
};

/// 1/2 in the field.
template <FieldScalar F>
F half(const FieldDescriptor& fd) {
  FieldOps<F>::check(fd);
  if constexpr (std::same_as<F, Complex>) {
    return {0.5, 0.0};
  } else {
    return Fp((fd.p() + 1) / 2, fd.p());
  }
}

inline std::uint32_t least_primitive_root(std::uint32_t p) {
  std::vector<std::uint32_t> factors;
  std::uint32_t m = p - 1;
  for (std::uint32_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (std::uint32_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : factors) {
      if (Fp(g, p).pow((p - 1) / q) == Fp(1, p)) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  return 1;  // p = 2, unreachable for valid descriptors
}

/// The primitive n-th root of unity: exp(2 pi i / n) over C, g^((p-1)/n) over F_p
/// with g the least primitive root mod p.
template <FieldScalar F>
F primitive_root_of_unity(std::int64_t n, const FieldDescriptor& fd) {
  FieldOps<F>::check(fd);
  if (n < 1) throw Error(ErrorCode::NoRootOfUnity, "order must be positive");
  if constexpr (std::same_as<F, Complex>) {
    if (n == 1) return {1.0, 0.0};
    if (n == 2) return {-1.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(n));
  } else {
    const std::uint32_t p = fd.p();
    if ((p - 1) % static_cast<std::uint32_t>(n) != 0)
      throw Error(ErrorCode::NoRootOfUnity,
                  std::to_string(n) + " does not divide p-1 = " + std::to_string(p - 1));
    return Fp(least_primitive_root(p), p).pow((p - 1) / static_cast<std::uint32_t>(n));
  }
}

/// eps^k for the canonical primitive n-th root, reducing k mod n first so that
/// equal exponents always produce bit-identical complex values.
template <FieldScalar F>
F root_power(std::int64_t n, std::int64_t k, const FieldDescriptor& fd) {
  k %= n;
  if (k < 0) k += n;
  if constexpr (std::same_as<F, Complex>) {
    if (k == 0) return {1.0, 0.0};
    if (2 * k == n) return {-1.0, 0.0};
    if (4 * k == n) return {0.0, 1.0};
    if (4 * k == 3 * n) return {0.0, -1.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  } else {
    return primitive_root_of_unity<Fp>(n, fd).pow(static_cast<std::uint64_t>(k));
  }
}

template <FieldScalar F>
bool approx_eq(const F& a, const F& b, const Tolerance& tol = {}) {
  if constexpr (std::same_as<F, Complex>) {
    return std::abs(a - b) <= tol.eq_tol;
  } else {
    return a == b;
  }
}

}  // namespace nonassoc
