#pragma once

// Shared test utilities: independent oracles implemented straight from the
// definitions, never through the library's enumeration or solver code paths.

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <ciimp/ciimp.hpp>

namespace testutil {

inline ciimp::CIStatement random_statement(ciimp::Rng& rng, const ciimp::UniversePtr& u) {
  const std::uint32_t full = u->full_mask();
  for (;;) {
    const std::uint32_t a = static_cast<std::uint32_t>(rng.next_u64()) & full;
    const std::uint32_t b = static_cast<std::uint32_t>(rng.next_u64()) & full & ~a;
    if (!a || !b) continue;
    const std::uint32_t c = static_cast<std::uint32_t>(rng.next_u64()) & full & ~(a | b);
    return ciimp::CIStatement(u, a, b, c);
  }
}

inline ciimp::CIStatement random_elementary(ciimp::Rng& rng, const ciimp::UniversePtr& u) {
  const int n = u->size();
  const int i = static_cast<int>(rng.below(n));
  int j = static_cast<int>(rng.below(n - 1));
  if (j >= i) ++j;
  const std::uint32_t ab = (std::uint32_t{1} << i) | (std::uint32_t{1} << j);
  const std::uint32_t c = static_cast<std::uint32_t>(rng.next_u64()) & u->full_mask() & ~ab;
  return ciimp::CIStatement(u, std::uint32_t{1} << i, std::uint32_t{1} << j, c);
}

/// Lattice membership straight from the definition: C ⊆ U, A ⊄ U, B ⊄ U.
inline bool in_lattice(const ciimp::CIStatement& s, std::uint32_t u_mask) {
  const std::uint32_t a = s.a_mask(), b = s.b_mask(), c = s.c_mask();
  return (u_mask & c) == c && (u_mask & a) != a && (u_mask & b) != b;
}

inline bool in_lattice_union(std::span<const ciimp::CIStatement> set, std::uint32_t u_mask) {
  for (const auto& s : set)
    if (in_lattice(s, u_mask)) return true;
  return false;
}

/// All lattice members by scanning every subset of the universe.
inline std::vector<std::uint32_t> lattice_masks_oracle(const ciimp::CIStatement& s) {
  std::vector<std::uint32_t> out;
  const std::uint32_t full = s.universe()->full_mask();
  for (std::uint32_t m = 0;; ++m) {
    if (in_lattice(s, m)) out.push_back(m);
    if (m == full) break;
  }
  return out;
}

/// Superset Moebius transform by the direct alternating sum.
template <class T>
ciimp::SetFunction<T> mobius_oracle(const ciimp::SetFunction<T>& f) {
  ciimp::SetFunction<T> out(f.universe());
  const std::uint32_t full = f.universe()->full_mask();
  for (std::uint32_t x = 0;; ++x) {
    T acc{};
    for (std::uint32_t u = x;; u = (u + 1) | x) {
      if (std::popcount(u ^ x) % 2 == 0)
        acc += f[u];
      else
        acc -= f[u];
      if (u == full) break;
    }
    out[x] = acc;
    if (x == full) break;
  }
  return out;
}

/// Unique solution of the dense rational system (all rows), if it exists and
/// the columns are linearly independent. Plain Gauss-Jordan.
inline std::optional<std::vector<ciimp::Rational>> gauss_unique(
    std::vector<std::vector<ciimp::Rational>> a, std::vector<ciimp::Rational> b) {
  using ciimp::Rational;
  const std::size_t m = a.size();
  const std::size_t k = m == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < m; ++col) {
    std::size_t sel = row;
    while (sel < m && a[sel][col] == 0) ++sel;
    if (sel == m) continue;
    std::swap(a[sel], a[row]);
    std::swap(b[sel], b[row]);
    const Rational inv = a[row][col];
    for (auto& v : a[row]) v /= inv;
    b[row] /= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t cc = 0; cc < k; ++cc) a[r][cc] -= f * a[row][cc];
      b[r] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < m; ++r)
    if (b[r] != 0) return std::nullopt;  // inconsistent
  if (pivot_col.size() < k) return std::nullopt;  // dependent columns: caller skips
  std::vector<Rational> x(k);
  for (std::size_t r = 0; r < k; ++r) x[pivot_col[r]] = b[r];
  return x;
}

/// Feasibility of A·x = b, x ≥ 0 by basic-solution enumeration: any feasible
/// system has a solution supported on linearly independent columns, so trying
/// every column subset with a unique solve is exhaustive. Columns ≤ ~6 only.
inline bool lp_feasible_oracle(const ciimp::SparseBinaryMatrix& A, std::span<const long long> b) {
  using ciimp::Rational;
  const int m = A.rows(), n = A.cols();
  bool b_zero = true;
  for (long long v : b) b_zero = b_zero && v == 0;
  if (b_zero) return true;
  for (std::uint32_t pick = 1; pick < (std::uint32_t{1} << n); ++pick) {
    if (std::popcount(pick) > m) continue;
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (pick & (std::uint32_t{1} << j)) cols.push_back(j);
    std::vector<std::vector<Rational>> dense(m, std::vector<Rational>(cols.size(), Rational(0)));
    for (std::size_t cj = 0; cj < cols.size(); ++cj)
      for (int r : A.column(cols[cj])) dense[r][cj] = 1;
    std::vector<Rational> rhs(b.begin(), b.end());
    auto x = gauss_unique(std::move(dense), std::move(rhs));
    if (!x) continue;
    bool nonneg = true;
    for (const Rational& v : *x) nonneg = nonneg && v >= 0;
    if (nonneg) return true;
  }
  return false;
}

/// Integer feasibility by exhaustive search. Every column must be nonempty so
/// entries are bounded by max(b).
inline bool ip_feasible_oracle(const ciimp::SparseBinaryMatrix& A, std::span<const long long> b) {
  const int n = A.cols();
  long long bound = 0;
  for (long long v : b) bound = std::max(bound, v);
  std::vector<long long> x(n, 0);
  for (;;) {
    std::vector<long long> acc(A.rows(), 0);
    for (int j = 0; j < n; ++j)
      for (int r : A.column(j)) acc[r] += x[j];
    bool ok = true;
    for (int r = 0; r < A.rows(); ++r) ok = ok && acc[r] == b[r];
    if (ok) return true;
    int pos = 0;
    while (pos < n && x[pos] == bound) x[pos++] = 0;
    if (pos == n) return false;
    ++x[pos];
  }
}

}  // namespace testutil
