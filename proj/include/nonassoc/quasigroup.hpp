#pragma once

// Idempotent quasigroups: operation tables, Latin/medial certificates, the
// boxplus group x [+] y = L_c^{-1}(xy), its cyclic structure, and the model
// quasigroup Z_N with u o v = (u + v)/2.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nonassoc/idempotents.hpp"

namespace nonassoc {

/// N x N table of indices 0..N-1.
struct QuasigroupTable {
  std::vector<std::vector<std::size_t>> table;

  std::size_t order() const { return table.size(); }
  std::size_t operator()(std::size_t i, std::size_t j) const { return table[i][j]; }

  static QuasigroupTable from_rows(std::vector<std::vector<std::size_t>> rows) { return {std::move(rows)}; }
};

/// Index table of products of idempotents; entries index into idm.elements.
template <FieldScalar F>
QuasigroupTable idm_table(const Algebra<F>& a, const IdempotentSet<F>& idm, const Tolerance& tol = {}) {
  if (!idm.complete) throw Error(ErrorCode::IncompleteSet, "idempotent table needs a complete set");
  const std::size_t n = idm.size();
  QuasigroupTable q;
  q.table.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const auto k = find_index(idm, mul(a, idm.elements[i], idm.elements[j]), tol);
      if (!k)
        throw Error(ErrorCode::ProductEscapes,
                    "c_" + std::to_string(i + 1) + " c_" + std::to_string(j + 1) + " is not in the set");
      q.table[i][j] = q.table[j][i] = *k;
    }
  return q;
}

inline bool is_latin(const QuasigroupTable& q) {
  const std::size_t n = q.order();
  for (std::size_t i = 0; i < n; ++i) {
    if (q.table[i].size() != n) return false;
    std::vector<bool> row(n, false);
    std::vector<bool> col(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = q(i, j);
      const std::size_t c = q(j, i);
      if (r >= n || c >= n || row[r] || col[c]) return false;
      row[r] = col[c] = true;
    }
  }
  return true;
}

inline bool is_commutative_table(const QuasigroupTable& q) {
  for (std::size_t i = 0; i < q.order(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (q(i, j) != q(j, i)) return false;
  return true;
}

inline bool is_idempotent_table(const QuasigroupTable& q) {
  for (std::size_t i = 0; i < q.order(); ++i)
    if (q(i, i) != i) return false;
  return true;
}

/// Relabeling phi : table indices -> Z_N with phi(x y) = (phi(x) + phi(y))/2.
struct ZNRelabeling {
  std::vector<std::int64_t> phi;
  bool verified = false;
};

inline std::int64_t half_mod(std::int64_t v, std::int64_t n) {
  v %= n;
  if (v < 0) v += n;
  return (v * ((n + 1) / 2)) % n;
}

/// Checks phi(q(i,j)) == (phi(i) + phi(j))/2 mod N on all pairs.
inline bool verify_relabeling(const QuasigroupTable& q, const std::vector<std::int64_t>& phi) {
  const std::size_t n = q.order();
  if (phi.size() != n || n % 2 == 0) return false;
  const auto nn = static_cast<std::int64_t>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (phi[q(i, j)] != half_mod(phi[i] + phi[j], nn)) return false;
  return true;
}

std::optional<ZNRelabeling> find_relabel_permutation(const QuasigroupTable& q);

struct MedialTableReport {
  bool verdict = false;
  bool exhaustive = false;
  std::size_t quadruples = 0;
  bool relabel_certificate = false;
};

/// (xy)(zw) = (xz)(yw): exhaustive for N <= 63, otherwise 10^6 seeded samples
/// plus a Z_N relabeling certificate (which proves the law exactly).
inline MedialTableReport is_medial_table(const QuasigroupTable& q, std::uint64_t seed = kDefaultSeed) {
  const std::size_t n = q.order();
  MedialTableReport r;
  auto holds = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
    return q(q(x, y), q(z, w)) == q(q(x, z), q(y, w));
  };
  if (n <= 63) {
    r.exhaustive = true;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z)
          for (std::size_t w = 0; w < n; ++w) {
            ++r.quadruples;
            if (!holds(x, y, z, w)) return r;
          }
    r.verdict = true;
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> u(0, n - 1);
  for (std::size_t s = 0; s < 1000000; ++s) {
    ++r.quadruples;
    if (!holds(u(rng), u(rng), u(rng), u(rng))) return r;
  }
  const auto rel = find_relabel_permutation(q);
  r.relabel_certificate = rel && rel->verified;
  r.verdict = r.relabel_certificate;
  return r;
}

/// Group table with identity index.
struct GroupTable {
  std::vector<std::vector<std::size_t>> table;
  std::size_t identity = 0;
  std::size_t order() const { return table.size(); }
};

/// Closure is implicit in an index table; this checks identity, inverses and
/// associativity on all triples.
inline bool is_group(const GroupTable& g) {
  const std::size_t n = g.order();
  for (std::size_t x = 0; x < n; ++x) {
    if (g.table[g.identity][x] != x || g.table[x][g.identity] != x) return false;
    bool inv = false;
    for (std::size_t y = 0; y < n && !inv; ++y) inv = g.table[x][y] == g.identity;
    if (!inv) return false;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (g.table[g.table[x][y]][z] != g.table[x][g.table[y][z]]) return false;
  return true;
}

/// x [+] y = L_e^{-1}(x y) computed inside the table: L_e is a permutation of
/// a Latin square row, and an automorphism whenever the table is medial and
/// idempotent.
inline GroupTable boxplus_from_table(const QuasigroupTable& q, std::size_t e) {
  const std::size_t n = q.order();
  if (!is_latin(q)) throw Error(ErrorCode::ClosureFailure, "table is not a Latin square");
  std::vector<std::size_t> inv(n);
  for (std::size_t z = 0; z < n; ++z) inv[q(e, z)] = z;
  GroupTable g;
  g.identity = e;
  g.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) g.table[x][y] = inv[q(x, y)];
  if (!is_group(g)) throw Error(ErrorCode::ClosureFailure, "boxplus is not a group");
  return g;
}

/// The same group computed in the algebra: L_c^{-1}(x y) for idempotents x, y,
/// matched back into the set.
template <FieldScalar F>
GroupTable boxplus_group(const Algebra<F>& a, const IdempotentSet<F>& idm, std::size_t c, const Tolerance& tol = {}) {
  const std::size_t n = idm.size();
  const Matrix<F> lc_inv =
      inverse(left_mul_matrix(a, idm.elements.at(c)), a.field(), 1e-12, ErrorCode::SingularLc);
  GroupTable g;
  g.identity = c;
  g.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) {
      const auto k = find_index(idm, lc_inv * mul(a, idm.elements[x], idm.elements[y]), tol);
      if (!k)
        throw Error(ErrorCode::ClosureFailure,
                    "c_" + std::to_string(x + 1) + " [+] c_" + std::to_string(y + 1) + " leaves the set");
      g.table[x][y] = g.table[y][x] = *k;
    }
  if (!is_group(g)) throw Error(ErrorCode::ClosureFailure, "boxplus fails the group axioms");
  return g;
}

/// Element whose multiples reach every element, smallest index first.
inline std::optional<std::size_t> find_generator(const GroupTable& g) {
  const std::size_t n = g.order();
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t acc = x;
    std::size_t k = 1;
    while (acc != g.identity) {
      acc = g.table[acc][x];
      ++k;
    }
    if (k == n) return x;
  }
  return std::nullopt;
}

/// phi(g^k) = k for a generator g of the boxplus group at @p e.
inline ZNRelabeling relabel_via_generator(const QuasigroupTable& q, std::size_t e) {
  const GroupTable g = boxplus_from_table(q, e);
  const auto gen = find_generator(g);
  if (!gen) throw Error(ErrorCode::NotCyclic, "boxplus group is not cyclic");
  ZNRelabeling r;
  r.phi.assign(q.order(), 0);
  std::size_t acc = g.identity;
  for (std::size_t k = 0; k < q.order(); ++k) {
    r.phi[acc] = static_cast<std::int64_t>(k);
    acc = g.table[acc][*gen];
  }
  r.verified = verify_relabeling(q, r.phi);
  return r;
}

inline std::optional<ZNRelabeling> find_relabel_permutation(const QuasigroupTable& q) {
  if (q.order() == 0 || q.order() % 2 == 0) return std::nullopt;
  if (!is_latin(q) || !is_idempotent_table(q) || !is_commutative_table(q)) return std::nullopt;
  try {
    auto r = relabel_via_generator(q, 0);
    if (!r.verified) return std::nullopt;
    return r;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Isotopy of Idm(A) onto Z_N through the boxplus group at the first idempotent.
template <FieldScalar F>
ZNRelabeling isotopy_to_ZN(const Algebra<F>& a, const IdempotentSet<F>& idm, const Tolerance& tol = {}) {
  const QuasigroupTable q = idm_table(a, idm, tol);
  const GroupTable g = boxplus_group(a, idm, 0, tol);
  const auto gen = find_generator(g);
  if (!gen) throw Error(ErrorCode::NotCyclic, "boxplus group is not cyclic");
  ZNRelabeling r;
  r.phi.assign(q.order(), 0);
  std::size_t acc = g.identity;
  for (std::size_t k = 0; k < q.order(); ++k) {
    r.phi[acc] = static_cast<std::int64_t>(k);
    acc = g.table[acc][*gen];
  }
  r.verified = verify_relabeling(q, r.phi);
  return r;
}

/// Table relabeled by phi: out[phi(i)][phi(j)] = phi(q(i,j)).
inline QuasigroupTable apply_relabeling(const QuasigroupTable& q, const std::vector<std::int64_t>& phi) {
  const std::size_t n = q.order();
  QuasigroupTable out;
  out.table.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.table[static_cast<std::size_t>(phi[i])][static_cast<std::size_t>(phi[j])] =
          static_cast<std::size_t>(phi[q(i, j)]);
  return out;
}

// ---- the model Z_N -------------------------------------------------------------

/// u o v = (u + v)(N + 1)/2 mod N.
inline QuasigroupTable build_ZN_quasigroup(std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::Usage, "N must be positive");
  if (n % 2 == 0) throw Error(ErrorCode::EvenOrder, "2 is not invertible mod " + std::to_string(n));
  QuasigroupTable q;
  const auto un = static_cast<std::size_t>(n);
  q.table.assign(un, std::vector<std::size_t>(un));
  for (std::int64_t u = 0; u < n; ++u)
    for (std::int64_t v = 0; v < n; ++v)
      q.table[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = static_cast<std::size_t>(half_mod(u + v, n));
  return q;
}

inline std::int64_t mod(std::int64_t v, std::int64_t n) {
  v %= n;
  return v < 0 ? v + n : v;
}

/// omega_N(m) = min{p >= 1 : (2^p - 1) m = 0 mod N}; omega_N(0) = 1.
inline std::int64_t omega(std::int64_t m, std::int64_t n) {
  m = mod(m, n);
  if (m == 0) return 1;
  std::int64_t pow2 = 2 % n;
  for (std::int64_t p = 1; p <= n; ++p) {
    if (mod((pow2 - 1) * m, n) == 0) return p;
    pow2 = (2 * pow2) % n;
  }
  throw Error(ErrorCode::EvenOrder, "2 has no multiplicative order mod " + std::to_string(n));
}

/// Length of the cycle of y under L_x : y -> x o y in Z_N; cross-checked
/// against omega_N(x - y).
inline std::int64_t circ_order(std::int64_t x, std::int64_t y, std::int64_t n) {
  if (n < 1 || n % 2 == 0) throw Error(ErrorCode::EvenOrder, "N must be odd");
  x = mod(x, n);
  y = mod(y, n);
  const std::int64_t w = omega(x - y, n);
  std::int64_t cur = half_mod(x + y, n);
  std::int64_t steps = 1;
  while (cur != y) {
    cur = half_mod(x + cur, n);
    ++steps;
  }
  if (steps != w)
    throw Error(ErrorCode::ClosureFailure, "iteration order " + std::to_string(steps) + " != omega " + std::to_string(w));
  return w;
}

struct PSet {
  std::set<std::int64_t> realized;          // {omega_N(m) : m != 0}, N = 2^n - 1
  std::set<std::int64_t> gcd_characterized; // {p <= n : gcd(p, n) > 1}
  bool agree = false;
};

inline PSet p_set(int n) {
  if (n < 2 || n > 30) throw Error(ErrorCode::Usage, "p_set needs 2 <= n <= 30");
  const std::int64_t big_n = (std::int64_t{1} << n) - 1;
  PSet s;
  for (std::int64_t m = 1; m < big_n; ++m) s.realized.insert(omega(m, big_n));
  for (int p = 1; p <= n; ++p)
    if (std::gcd(p, n) > 1) s.gcd_characterized.insert(p);
  s.agree = s.realized == s.gcd_characterized;
  return s;
}

/// Cycles of y -> x o y on Z_N, ordered by length, then smallest start. Each
/// cycle starts at its least label (labels 1..N, residue 0 labeled N) and
/// follows the map.
inline std::vector<std::vector<std::int64_t>> orbits(std::int64_t n, std::int64_t x) {
  if (n < 1 || n % 2 == 0) throw Error(ErrorCode::EvenOrder, "N must be odd");
  x = mod(x, n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<std::int64_t>> out;
  for (std::int64_t label = 1; label <= n; ++label) {
    const std::int64_t start = label % n;
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<std::int64_t> cyc;
    std::int64_t cur = start;
    while (!seen[static_cast<std::size_t>(cur)]) {
      seen[static_cast<std::size_t>(cur)] = true;
      cyc.push_back(cur);
      cur = half_mod(x + cur, n);
    }
    out.push_back(std::move(cyc));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

// ---- formatting ----------------------------------------------------------------

/// 1-indexed grid with a header row, as in a printed multiplication table.
inline std::string format_table(const QuasigroupTable& q) {
  const std::size_t n = q.order();
  const std::size_t w = std::to_string(n).size();
  auto cell = [&](std::size_t v) {
    std::string s = std::to_string(v);
    return std::string(w + 1 - s.size(), ' ') + s;
  };
  std::ostringstream os;
  os << std::string(w, ' ') << " |";
  for (std::size_t j = 0; j < n; ++j) os << cell(j + 1);
  os << '\n' << std::string(w + 1, '-') << '+' << std::string(n * (w + 1), '-') << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    os << std::string(w - std::to_string(i + 1).size(), ' ') << i + 1 << " |";
    for (std::size_t j = 0; j < n; ++j) os << cell(q(i, j) + 1);
    os << '\n';
  }
  return os.str();
}

/// Z_N residue as printed: 1..N with 0 shown as N.
inline std::int64_t zn_label(std::int64_t v, std::int64_t n) { return v == 0 ? n : v; }

/// Table over Z_N with rows/columns and entries labeled 1..N (0 shown as N).
inline std::string format_zn_table(const QuasigroupTable& q) {
  const auto n = static_cast<std::int64_t>(q.order());
  QuasigroupTable shifted;
  shifted.table.assign(q.order(), std::vector<std::size_t>(q.order()));
  // position label L (1..N) holds residue L mod N
  for (std::int64_t i = 1; i <= n; ++i)
    for (std::int64_t j = 1; j <= n; ++j) {
      const std::int64_t v = static_cast<std::int64_t>(q(static_cast<std::size_t>(i % n), static_cast<std::size_t>(j % n)));
      shifted.table[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] =
          static_cast<std::size_t>(zn_label(v, n) - 1);
    }
  return format_table(shifted);
}

inline std::string format_orbits(const std::vector<std::vector<std::int64_t>>& cycles, std::int64_t n) {
  std::ostringstream os;
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " -> " : "") << zn_label(c[i], n);
    os << '\n';
  }
  return os.str();
}

}  // namespace nonassoc
