#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

/// Guard for the exponential enumeration routines. They materialize subsets of
/// the variable universe, so past ~20 variables memory becomes the binding
/// constraint; callers working at larger sizes must raise the cap explicitly.
struct EnumOptions {
  int max_enum_vars = 20;
};

inline void check_enum_cap(const UniversePtr& universe, const EnumOptions& opts) {
  if (universe->size() > opts.max_enum_vars)
    throw std::length_error("enumeration over " + std::to_string(universe->size()) +
                            " variables exceeds the configured cap of " +
                            std::to_string(opts.max_enum_vars));
}

/// A set of variable subsets stored as sorted bitmasks. Used for the interval
/// structure attached to a statement: membership and inclusion queries reduce
/// to binary search over the mask array.
class SemiLattice {
 public:
  SemiLattice(UniversePtr universe, std::vector<std::uint32_t> sorted_masks)
      : universe_(std::move(universe)), masks_(std::move(sorted_masks)) {}

  const UniversePtr& universe() const { return universe_; }
  const std::vector<std::uint32_t>& masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }
  bool empty() const { return masks_.empty(); }

  bool contains(std::uint32_t mask) const {
    return std::binary_search(masks_.begin(), masks_.end(), mask);
  }

  /// True iff every member of `other` is a member of this.
  bool includes(const SemiLattice& other) const {
    // Both sides are sorted, so a single merge pass suffices.
    auto it = masks_.begin();
    for (std::uint32_t m : other.masks_) {
      it = std::lower_bound(it, masks_.end(), m);
      if (it == masks_.end() || *it != m) return false;
    }
    return true;
  }

  VarSet element(std::size_t i) const { return VarSet(universe_, masks_.at(i)); }

 private:
  UniversePtr universe_;
  std::vector<std::uint32_t> masks_;
};

namespace detail {

/// Appends, in ascending mask order, every U with C ⊆ U ⊆ S such that U
/// contains neither independent side of `s` entirely.
inline void append_lattice_masks(const CIStatement& s, std::vector<std::uint32_t>& out) {
  const std::uint32_t c = s.c_mask();
  const std::uint32_t rest = s.universe()->full_mask() & ~c;
  const std::uint32_t a = s.a_mask(), b = s.b_mask();
  // Ascending enumeration of submasks of `rest`; adding the fixed part c
  // preserves the order because c and rest are disjoint.
  std::uint32_t sub = 0;
  while (true) {
    const std::uint32_t u = c | sub;
    if ((u & a) != a && (u & b) != b) out.push_back(u);
    if (sub == rest) break;
    sub = (sub - rest) & rest;
  }
}

}  // namespace detail

/// The interval structure of a single statement: all subsets between the
/// conditioning set and the full universe that cut both independent sides.
inline SemiLattice semi_lattice(const CIStatement& s, const EnumOptions& opts = {}) {
  check_enum_cap(s.universe(), opts);
  std::vector<std::uint32_t> masks;
  detail::append_lattice_masks(s, masks);
  return SemiLattice(s.universe(), std::move(masks));
}

/// Union of the interval structures of a statement set. All statements must
/// share one universe.
inline SemiLattice semi_lattice_union(std::span<const CIStatement> set, const EnumOptions& opts = {}) {
  if (set.empty()) throw std::invalid_argument("semi_lattice_union: empty statement set");
  const UniversePtr& universe = set.front().universe();
  for (const CIStatement& s : set)
    if (!same_universe(s.universe(), universe))
      throw std::invalid_argument("semi_lattice_union: statements over different universes");
  check_enum_cap(universe, opts);
  std::vector<std::uint32_t> masks;
  for (const CIStatement& s : set) detail::append_lattice_masks(s, masks);
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  return SemiLattice(universe, std::move(masks));
}

/// Chain-rule refinement of a statement into elementary statements: for sides
/// A = {a_1 < … < a_p} and B = {b_1 < … < b_q}, the pieces are
/// I(a_i, b_j | C ∪ {a_1..a_{i-1}} ∪ {b_1..b_{j-1}}). Their interval
/// structures partition the statement's own: a member U maps to the unique
/// piece given by the smallest a_i ∉ U and smallest b_j ∉ U.
inline std::vector<CIStatement> elementary_decomposition(const CIStatement& s) {
  const std::vector<int> as = s.a().indices(), bs = s.b().indices();
  std::vector<CIStatement> out;
  out.reserve(as.size() * bs.size());
  std::uint32_t a_prefix = 0;
  for (int ai : as) {
    std::uint32_t b_prefix = 0;
    for (int bj : bs) {
      out.emplace_back(s.universe(), std::uint32_t{1} << ai, std::uint32_t{1} << bj,
                       s.c_mask() | a_prefix | b_prefix);
      b_prefix |= std::uint32_t{1} << bj;
    }
    a_prefix |= std::uint32_t{1} << ai;
  }
  return out;
}

/// All elementary statements over the universe in canonical order: variable
/// pairs (i, j) with i < j ordered lexicographically, and for each pair the
/// conditioning sets in ascending mask order. Count: C(n,2) * 2^(n-2).
inline std::vector<CIStatement> enumerate_elementary(const UniversePtr& universe,
                                                     const EnumOptions& opts = {}) {
  check_enum_cap(universe, opts);
  const int n = universe->size();
  const std::uint32_t full = universe->full_mask();
  std::vector<CIStatement> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 << (n - 2));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t a = std::uint32_t{1} << i;
      const std::uint32_t b = std::uint32_t{1} << j;
      const std::uint32_t rest = full & ~(a | b);
      std::uint32_t sub = 0;
      while (true) {
        out.emplace_back(universe, a, b, sub);
        if (sub == rest) break;
        sub = (sub - rest) & rest;
      }
    }
  }
  return out;
}

}  // namespace ciimp
