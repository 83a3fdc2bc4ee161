#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ciimp/rational.hpp"
#include "ciimp/sparse_matrix.hpp"

namespace ciimp {

namespace detail {

/// Raised by SmallRational when a reduced value no longer fits in 64 bits;
/// the caller re-solves with arbitrary-precision rationals.
struct SmallRationalOverflow : std::overflow_error {
  SmallRationalOverflow() : std::overflow_error("exact 64-bit rational overflow") {}
};

inline std::int64_t gcd128(__int128 a, __int128 b) {
  unsigned __int128 x = a < 0 ? static_cast<unsigned __int128>(-a) : static_cast<unsigned __int128>(a);
  unsigned __int128 y = b < 0 ? static_cast<unsigned __int128>(-b) : static_cast<unsigned __int128>(b);
  while (y != 0) {
    unsigned __int128 t = x % y;
    x = y;
    y = t;
  }
  if (x > static_cast<unsigned __int128>(INT64_MAX)) throw SmallRationalOverflow();
  return static_cast<std::int64_t>(x);
}

/// Exact rational on int64 numerator/denominator, always reduced, denominator
/// positive. Arithmetic takes an overflow-checked 64-bit fast path and falls
/// back to 128-bit intermediates; a result that does not fit after reduction
/// throws SmallRationalOverflow. INT64_MIN is excluded so negation is total.
class SmallRational {
 public:
  SmallRational() : num_(0), den_(1) {}
  SmallRational(long long v) : num_(v), den_(1) {
    if (v == INT64_MIN) throw SmallRationalOverflow();
  }

  static SmallRational from_parts(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("SmallRational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return SmallRational();
    const std::int64_t g = gcd128(num, den);
    num /= g;
    den /= g;
    if (num > static_cast<__int128>(INT64_MAX) || num < -static_cast<__int128>(INT64_MAX) ||
        den > static_cast<__int128>(INT64_MAX))
      throw SmallRationalOverflow();
    SmallRational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  friend SmallRational operator-(const SmallRational& a) {
    SmallRational r;
    r.num_ = -a.num_;
    r.den_ = a.den_;
    return r;
  }

  friend SmallRational operator+(const SmallRational& a, const SmallRational& b) {
    if (a.num_ == 0) return b;
    if (b.num_ == 0) return a;
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t bd = b.den_ / g, ad = a.den_ / g;
    std::int64_t t1, t2, num, den;
    if (!__builtin_mul_overflow(a.num_, bd, &t1) && !__builtin_mul_overflow(b.num_, ad, &t2) &&
        !__builtin_add_overflow(t1, t2, &num) && !__builtin_mul_overflow(a.den_, bd, &den)) {
      if (num == 0) return SmallRational();
      if (num != INT64_MIN) {
        // num and den share factors only within g.
        const std::int64_t g2 = std::gcd(num < 0 ? -num : num, g);
        if (g2 > 1) {
          num /= g2;
          den /= g2;
        }
        SmallRational r;
        r.num_ = num;
        r.den_ = den;
        return r;
      }
    }
    return from_parts(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                      static_cast<__int128>(a.den_) * b.den_);
  }

  friend SmallRational operator-(const SmallRational& a, const SmallRational& b) { return a + (-b); }

  friend SmallRational operator*(const SmallRational& a, const SmallRational& b) {
    if (a.num_ == 0 || b.num_ == 0) return SmallRational();
    const std::int64_t g1 = std::gcd(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
    std::int64_t num, den;
    if (!__builtin_mul_overflow(a.num_ / g1, b.num_ / g2, &num) &&
        !__builtin_mul_overflow(a.den_ / g2, b.den_ / g1, &den)) {
      SmallRational r;
      r.num_ = num;
      r.den_ = den;
      if (num != INT64_MIN) return r;
    }
    return from_parts(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }

  friend SmallRational operator/(const SmallRational& a, const SmallRational& b) {
    if (b.num_ == 0) throw std::domain_error("SmallRational: division by zero");
    SmallRational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
    return a * inv;
  }

  SmallRational& operator+=(const SmallRational& o) { return *this = *this + o; }
  SmallRational& operator-=(const SmallRational& o) { return *this = *this - o; }
  SmallRational& operator*=(const SmallRational& o) { return *this = *this * o; }
  SmallRational& operator/=(const SmallRational& o) { return *this = *this / o; }

  friend bool operator==(const SmallRational& a, const SmallRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const SmallRational& a, const SmallRational& b) { return !(a == b); }
  friend bool operator<(const SmallRational& a, const SmallRational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const SmallRational& a, const SmallRational& b) { return b < a; }
  friend bool operator<=(const SmallRational& a, const SmallRational& b) { return !(b < a); }
  friend bool operator>=(const SmallRational& a, const SmallRational& b) { return !(a < b); }

 private:
  std::int64_t num_, den_;
};

inline Rational widen(const SmallRational& r) { return Rational(r.num(), r.den()); }
inline Rational widen(const Rational& r) { return r; }
inline bool scalar_is_zero(const SmallRational& r) { return r.is_zero(); }
inline bool scalar_is_zero(const Rational& r) { return r.sign() == 0; }

/// Phase-1 simplex on A·x = b, x ≥ 0 with one artificial variable per row.
/// Artificial columns are implicit (their basis rows are tagged) and are
/// dropped for good when they leave the basis. The tableau is dense row-major,
/// but pivot updates skip rows with a zero multiplier and entries with a zero
/// pivot-row coefficient, which is where the sparsity of the 0-1 systems pays.
///
/// Pivot rule: Dantzig (most-positive reduced cost, smallest index on ties),
/// switching to Bland's rule after a run of degenerate pivots and back after
/// the next progress-making pivot. Any infinite pivot sequence would have an
/// all-degenerate tail, which would put the solver permanently under Bland's
/// rule, which does not cycle — so the hybrid terminates.
template <class Scalar>
class PhaseOneTableau {
 public:
  PhaseOneTableau(const SparseBinaryMatrix& A, std::span<const long long> b)
      : m_(A.rows()), n_(A.cols()), width_(n_ + 1), t_(static_cast<std::size_t>(m_ + 1) * (n_ + 1)) {
    basis_.assign(m_, kArtificial);
    basic_col_.assign(n_, false);
    for (int j = 0; j < n_; ++j)
      for (int r : A.column(j)) at(r, j) = Scalar(1);
    for (int i = 0; i < m_; ++i) at(i, n_) = Scalar(b[i]);
    // Objective row: w = sum of artificials = sum of all constraint rows.
    for (int j = 0; j <= n_; ++j) {
      Scalar sum;
      for (int i = 0; i < m_; ++i) sum += at(i, j);
      at(m_, j) = sum;
    }
  }

  /// Returns true iff the system is feasible. Crash columns are tried first,
  /// in order, as entering candidates; they only take pivots that the
  /// objective permits, so they are a pure pivot-order hint.
  bool solve(std::span<const int> crash_columns) {
    for (int c : crash_columns) {
      if (c < 0 || c >= n_) throw std::invalid_argument("crash column out of range");
      if (basic_col_[c] || !(Scalar() < at(m_, c))) continue;
      pivot(leaving_row(c), c);
    }
    int consecutive_degenerate = 0;
    bool bland = false;
    while (!scalar_is_zero(at(m_, n_))) {
      const int c = bland ? entering_bland() : entering_dantzig();
      if (c < 0) return false;  // phase-1 optimum positive
      const int r = leaving_row(c);
      const bool degenerate = scalar_is_zero(at(r, n_));
      pivot(r, c);
      if (degenerate) {
        if (++consecutive_degenerate >= kDegenerateRunLimit) bland = true;
      } else {
        consecutive_degenerate = 0;
        bland = false;
      }
    }
    return true;
  }

  /// Structural solution at the final basis; basic artificials are at value 0
  /// whenever solve() returned true.
  std::vector<Rational> solution() const {
    std::vector<Rational> x(n_, Rational(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] != kArtificial) x[basis_[i]] = widen(at(i, n_));
    return x;
  }

 private:
  static constexpr int kArtificial = -1;
  static constexpr int kDegenerateRunLimit = 16;

  Scalar& at(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
  const Scalar& at(int i, int j) const { return t_[static_cast<std::size_t>(i) * width_ + j]; }

  int entering_dantzig() const {
    int best = -1;
    const Scalar* obj = &t_[static_cast<std::size_t>(m_) * width_];
    for (int j = 0; j < n_; ++j)
      if (!basic_col_[j] && Scalar() < obj[j] && (best < 0 || obj[best] < obj[j])) best = j;
    return best;
  }

  int entering_bland() const {
    const Scalar* obj = &t_[static_cast<std::size_t>(m_) * width_];
    for (int j = 0; j < n_; ++j)
      if (!basic_col_[j] && Scalar() < obj[j]) return j;
    return -1;
  }

  /// Minimum-ratio row for entering column c. Ties break toward the smallest
  /// basis-variable index (artificial on row i counts as index n + i), the
  /// order Bland's rule needs; it is deterministic for Dantzig mode too.
  int leaving_row(int c) const {
    int best = -1;
    Scalar best_ratio;
    for (int i = 0; i < m_; ++i) {
      const Scalar& entry = at(i, c);
      if (!(Scalar() < entry)) continue;
      Scalar ratio = at(i, n_) / entry;
      if (best < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_index(i) < basis_index(best))) {
        best = i;
        best_ratio = ratio;
      }
    }
    if (best < 0) throw std::logic_error("phase-1 entering column has no positive entry");
    return best;
  }

  int basis_index(int row) const { return basis_[row] == kArtificial ? n_ + row : basis_[row]; }

  void pivot(int r, int c) {
    Scalar* prow = &t_[static_cast<std::size_t>(r) * width_];
    const Scalar piv = prow[c];
    if (!(piv == Scalar(1)))
      for (int j = 0; j <= n_; ++j)
        if (!scalar_is_zero(prow[j])) prow[j] /= piv;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      Scalar* row = &t_[static_cast<std::size_t>(i) * width_];
      const Scalar mult = row[c];
      if (scalar_is_zero(mult)) continue;
      for (int j = 0; j <= n_; ++j)
        if (!scalar_is_zero(prow[j])) row[j] -= mult * prow[j];
      row[c] = Scalar();
    }
    prow[c] = Scalar(1);
    if (basis_[r] != kArtificial) basic_col_[basis_[r]] = false;
    basis_[r] = c;
    basic_col_[c] = true;
  }

  int m_, n_, width_;
  std::vector<Scalar> t_;
  std::vector<int> basis_;
  std::vector<char> basic_col_;
};

/// Exact presolve for A·x = b, x ≥ 0 over a 0-1 matrix. Each reduction
/// replaces the system by one with the identical solution set:
///   - a row with no columns left is decided on the spot: feasible iff b = 0;
///   - a row with b = 0 forces every column it covers to zero;
///   - a row with a single column forces that column to its right-hand side,
///     and the value is substituted into every other row covering it;
///   - equal-pattern rows must agree on b, and the duplicate is dropped;
///   - a row whose pattern strictly contains another's is replaced by the
///     set difference with b reduced by the contained row's — subtracting
///     the contained equation cancels its columns exactly, so the result is
///     still a 0-1 row.
/// A right-hand side driven negative or contradicted certifies infeasibility:
/// column values are nonnegative and cannot repair it. Right-hand sides only
/// ever decrease, so they stay within their original 64-bit range.
class EqualityPresolve {
 public:
  EqualityPresolve(const SparseBinaryMatrix& A, std::span<const long long> b)
      : a_(A),
        m_(A.rows()),
        n_(A.cols()),
        words_((n_ + 63) / 64),
        bits_(static_cast<std::size_t>(m_) * words_),
        b_(b.begin(), b.end()),
        row_alive_(m_, 1),
        pc_(m_, 0),
        fixed_(n_, -1),
        rows_left_(m_) {
    for (int j = 0; j < n_; ++j)
      for (int r : A.column(j)) {
        row_bits(r)[j >> 6] |= std::uint64_t{1} << (j & 63);
        ++pc_[r];
      }
  }

  /// Applies the reductions to a fixpoint and reports false on infeasibility.
  /// The pair sweep is repeated only while it changes something, under a cap;
  /// whatever survives is handed to the tableau unchanged, so the cap bounds
  /// work without affecting exactness.
  bool reduce() {
    for (int r = m_ - 1; r >= 0; --r) work_.push_back(r);
    drain();
    for (int sweep = 0; sweep < kMaxSweeps && !infeasible_ && rows_left_ > 1; ++sweep) {
      if (!pair_sweep()) break;
      drain();
    }
    return !infeasible_;
  }

  /// True once no rows remain; every covered column is then fixed and the
  /// base solution alone solves the system.
  bool decided() const { return rows_left_ == 0; }

  /// Fixed values for all original columns; never-covered and freed columns
  /// sit at zero. Columns of the reduced system are zero here and take their
  /// values from its solution instead.
  std::vector<Rational> base_solution() const {
    std::vector<Rational> x;
    x.reserve(n_);
    for (int j = 0; j < n_; ++j) x.emplace_back(fixed_[j] < 0 ? 0 : fixed_[j]);
    return x;
  }

  /// The surviving subsystem, rows and columns in original order.
  struct Reduced {
    SparseBinaryMatrix matrix;
    std::vector<long long> rhs;
    std::vector<int> col_origin;   // reduced column -> original column
    std::vector<int> col_reduced;  // original column -> reduced column or -1
  };

  Reduced reduced() const {
    std::vector<int> row_map(m_, -1);
    std::vector<long long> rhs;
    rhs.reserve(rows_left_);
    for (int r = 0; r < m_; ++r)
      if (row_alive_[r]) {
        row_map[r] = static_cast<int>(rhs.size());
        rhs.push_back(b_[r]);
      }
    std::vector<std::vector<int>> cols;
    std::vector<int> col_origin;
    std::vector<int> col_reduced(n_, -1);
    for (int j = 0; j < n_; ++j) {
      if (fixed_[j] >= 0) continue;
      std::vector<int> rows;
      for (int r : a_.column(j))
        if (row_alive_[r] && test_bit(r, j)) rows.push_back(row_map[r]);
      if (rows.empty()) continue;  // unconstrained column; base solution keeps it 0
      col_reduced[j] = static_cast<int>(cols.size());
      col_origin.push_back(j);
      cols.push_back(std::move(rows));
    }
    const int n_rows = static_cast<int>(rhs.size());
    return {SparseBinaryMatrix(n_rows, std::move(cols)), std::move(rhs), std::move(col_origin),
            std::move(col_reduced)};
  }

 private:
  static constexpr int kMaxSweeps = 25;

  std::uint64_t* row_bits(int r) { return bits_.data() + static_cast<std::size_t>(r) * words_; }
  const std::uint64_t* row_bits(int r) const {
    return bits_.data() + static_cast<std::size_t>(r) * words_;
  }
  bool test_bit(int r, int j) const { return (row_bits(r)[j >> 6] >> (j & 63)) & 1; }

  void drop_row(int r) {
    row_alive_[r] = 0;
    --rows_left_;
  }

  /// Fixes column j to v ≥ 0 and substitutes it into every row covering j.
  void fix_column(int j, long long v) {
    if (fixed_[j] >= 0) throw std::logic_error("presolve: column fixed twice");
    fixed_[j] = v;
    for (int r : a_.column(j)) {
      if (!row_alive_[r] || !test_bit(r, j)) continue;
      row_bits(r)[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
      --pc_[r];
      b_[r] -= v;
      if (b_[r] < 0) {
        infeasible_ = true;
        return;
      }
      work_.push_back(r);
    }
  }

  /// Empty-row, zero-rhs and single-column reductions, run until the work
  /// list is exhausted. Rows re-enter the list whenever their pattern or
  /// right-hand side changes, so this is a fixpoint over those three rules.
  void drain() {
    while (!work_.empty() && !infeasible_) {
      const int r = work_.back();
      work_.pop_back();
      if (!row_alive_[r]) continue;
      if (pc_[r] == 0) {
        if (b_[r] != 0) {
          infeasible_ = true;
          return;
        }
        drop_row(r);
      } else if (b_[r] == 0) {
        for (int j : row_columns(r)) {
          fix_column(j, 0);
          if (infeasible_) return;
        }
      } else if (pc_[r] == 1) {
        // substitution also hits r itself, emptying it for the branch above
        fix_column(first_column(r), b_[r]);
      }
    }
  }

  std::vector<int> row_columns(int r) const {
    std::vector<int> cols;
    cols.reserve(pc_[r]);
    const std::uint64_t* w = row_bits(r);
    for (int k = 0; k < words_; ++k)
      for (std::uint64_t word = w[k]; word != 0; word &= word - 1)
        cols.push_back(k * 64 + std::countr_zero(word));
    return cols;
  }

  int first_column(int r) const {
    const std::uint64_t* w = row_bits(r);
    for (int k = 0; k < words_; ++k)
      if (w[k] != 0) return k * 64 + std::countr_zero(w[k]);
    throw std::logic_error("presolve: no column in nonempty row");
  }

  /// Duplicate and containment reductions over all ordered pairs of live
  /// rows; mutations take effect immediately, so later comparisons see the
  /// already-reduced patterns. Returns whether anything changed.
  bool pair_sweep() {
    std::vector<int> alive;
    alive.reserve(rows_left_);
    for (int r = 0; r < m_; ++r)
      if (row_alive_[r]) alive.push_back(r);
    bool changed = false;
    for (int u : alive) {
      if (!row_alive_[u]) continue;
      std::uint64_t* wu = row_bits(u);
      for (int v : alive) {
        if (v == u || !row_alive_[v]) continue;
        const std::uint64_t* wv = row_bits(v);
        bool subset = true;
        for (int k = 0; k < words_ && subset; ++k) subset = (wv[k] & ~wu[k]) == 0;
        if (!subset) continue;
        if (pc_[v] == pc_[u]) {  // equal patterns: right-hand sides must agree
          if (b_[v] != b_[u]) {
            infeasible_ = true;
            return true;
          }
          drop_row(std::max(u, v));
          changed = true;
          if (!row_alive_[u]) break;
        } else {  // v ⊊ u: subtract the contained equation from u
          for (int k = 0; k < words_; ++k) wu[k] &= ~wv[k];
          pc_[u] -= pc_[v];
          b_[u] -= b_[v];
          if (b_[u] < 0) {
            infeasible_ = true;
            return true;
          }
          work_.push_back(u);
          changed = true;
        }
      }
    }
    return changed;
  }

  const SparseBinaryMatrix& a_;
  int m_, n_, words_;
  std::vector<std::uint64_t> bits_;
  std::vector<long long> b_;
  std::vector<char> row_alive_;
  std::vector<int> pc_;
  std::vector<long long> fixed_;
  std::vector<int> work_;
  int rows_left_;
  bool infeasible_ = false;
};

}  // namespace detail

/// Result of a feasibility solve; the solution is present iff feasible, has
/// one entry per column, and satisfies A·x = b, x ≥ 0 exactly.
struct FeasibilityOutcome {
  bool feasible = false;
  std::optional<std::vector<Rational>> solution;
};

/// True iff x ≥ 0 entrywise and A·x = b in exact arithmetic.
inline bool verify_solution(const SparseBinaryMatrix& A, std::span<const long long> b,
                            std::span<const Rational> x) {
  if (static_cast<int>(b.size()) != A.rows() || static_cast<int>(x.size()) != A.cols()) return false;
  for (const Rational& v : x)
    if (v < 0) return false;
  std::vector<Rational> lhs(A.rows(), Rational(0));
  for (int j = 0; j < A.cols(); ++j) {
    if (x[j].sign() == 0) continue;
    for (int r : A.column(j)) lhs[r] += x[j];
  }
  for (int i = 0; i < A.rows(); ++i)
    if (lhs[i] != b[i]) return false;
  return true;
}

/// Solver switches. Presolve is on by default and is never wrong to keep on;
/// benchmarks that compare constraint-matrix constructions turn it off,
/// because its reductions fold structurally different matrices into the same
/// core and would measure that core twice.
struct LpOptions {
  bool presolve = true;
};

/// Exact rational feasibility of A·x = b, x ≥ 0. Presolve reductions shrink
/// the system first and often decide it outright; any remainder goes through
/// phase-1 simplex over 64-bit rationals, re-solved with arbitrary precision
/// if a tableau value outgrows them. Every step is exact, so the outcome and
/// the returned solution are identical on both scalar paths. `crash_columns`
/// is an optional entering order hint (columns expected to carry a feasible
/// combination); it affects pivot order, hence possibly which solution is
/// found, never feasibility.
inline FeasibilityOutcome lp_feasible(const SparseBinaryMatrix& A, std::span<const long long> b,
                                      std::span<const int> crash_columns = {},
                                      const LpOptions& options = {}) {
  if (static_cast<int>(b.size()) != A.rows())
    throw std::invalid_argument("lp_feasible: dimension mismatch");
  for (long long v : b)
    if (v < 0) throw std::invalid_argument("lp_feasible: negative right-hand side");
  for (int c : crash_columns)
    if (c < 0 || c >= A.cols()) throw std::invalid_argument("crash column out of range");

  const auto solve_system = [](const SparseBinaryMatrix& M, std::span<const long long> rhs,
                               std::span<const int> crash) -> std::optional<std::vector<Rational>> {
    const auto run = [&](auto scalar_tag) -> std::optional<std::vector<Rational>> {
      using Scalar = decltype(scalar_tag);
      detail::PhaseOneTableau<Scalar> tableau(M, rhs);
      if (!tableau.solve(crash)) return std::nullopt;
      return tableau.solution();
    };
    try {
      return run(detail::SmallRational());
    } catch (const detail::SmallRationalOverflow&) {
      return run(Rational());
    }
  };

  if (!options.presolve) {
    auto sol = solve_system(A, b, crash_columns);
    if (!sol) return {false, std::nullopt};
    return {true, std::move(sol)};
  }

  detail::EqualityPresolve pre(A, b);
  if (!pre.reduce()) return {false, std::nullopt};
  std::vector<Rational> base = pre.base_solution();
  if (pre.decided()) return {true, std::move(base)};

  const auto sub = pre.reduced();
  std::vector<int> crash;
  crash.reserve(crash_columns.size());
  for (int c : crash_columns)
    if (sub.col_reduced[c] >= 0) crash.push_back(sub.col_reduced[c]);

  auto sol = solve_system(sub.matrix, sub.rhs, crash);
  if (!sol) return {false, std::nullopt};
  for (std::size_t k = 0; k < sol->size(); ++k) base[sub.col_origin[k]] = std::move((*sol)[k]);
  return {true, std::move(base)};
}

}  // namespace ciimp
