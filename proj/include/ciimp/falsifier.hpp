#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ciimp/semilattice.hpp"
#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

namespace detail {

/// Membership bitmap over all 2^n subsets of the universe; the lattice union
/// of an antecedent set is queried far more often than it is enumerated.
class SubsetBitmap {
 public:
  explicit SubsetBitmap(int n_vars) : words_((std::size_t{1} << n_vars) / 64 + 1, 0) {}

  void insert(std::uint32_t mask) { words_[mask >> 6] |= std::uint64_t{1} << (mask & 63); }
  bool contains(std::uint32_t mask) const {
    return (words_[mask >> 6] >> (mask & 63)) & 1;
  }

 private:
  std::vector<std::uint64_t> words_;
};

inline SubsetBitmap lattice_union_bitmap(std::span<const CIStatement> antecedents,
                                         const UniversePtr& universe) {
  SubsetBitmap bitmap(universe->size());
  std::vector<std::uint32_t> masks;
  for (const CIStatement& s : antecedents) {
    if (!same_universe(s.universe(), universe))
      throw std::invalid_argument("antecedents over different universes");
    masks.clear();
    append_lattice_masks(s, masks);
    for (std::uint32_t m : masks) bitmap.insert(m);
  }
  return bitmap;
}

}  // namespace detail

/// Outcome of the lattice-inclusion test. A witness is present exactly when
/// inclusion fails: a subset lying in the consequent's lattice but not in the
/// antecedents' union, which certifies non-implication.
struct FalsificationResult {
  bool included = false;
  std::optional<VarSet> witness;
};

/// Tests L(consequent) ⊆ L(antecedents). On failure the witness is the
/// smallest missing subset in ascending mask order.
inline FalsificationResult check_inclusion(std::span<const CIStatement> antecedents,
                                           const CIStatement& consequent,
                                           const EnumOptions& opts = {}) {
  const UniversePtr& universe = consequent.universe();
  check_enum_cap(universe, opts);
  const detail::SubsetBitmap in_union = detail::lattice_union_bitmap(antecedents, universe);
  std::vector<std::uint32_t> target;
  detail::append_lattice_masks(consequent, target);
  for (std::uint32_t m : target)
    if (!in_union.contains(m)) return {false, VarSet(universe, m)};
  return {true, std::nullopt};
}

/// All elementary statements whose lattice lies inside the antecedents' union
/// — the column set of the validation system — in canonical order. An
/// elementary lattice is the subset interval [K, S∖{a,b}], so containment is
/// one interval scan with early exit.
inline std::vector<CIStatement> relevant_elementary(std::span<const CIStatement> antecedents,
                                                    const EnumOptions& opts = {}) {
  if (antecedents.empty()) throw std::invalid_argument("relevant_elementary: empty statement set");
  const UniversePtr& universe = antecedents.front().universe();
  check_enum_cap(universe, opts);
  const detail::SubsetBitmap in_union = detail::lattice_union_bitmap(antecedents, universe);
  const int n = universe->size();
  const std::uint32_t full = universe->full_mask();
  std::vector<CIStatement> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t a = std::uint32_t{1} << i;
      const std::uint32_t b = std::uint32_t{1} << j;
      const std::uint32_t rest = full & ~(a | b);
      std::uint32_t k = 0;
      while (true) {
        const std::uint32_t free = rest & ~k;
        bool inside = true;
        std::uint32_t sub = 0;
        while (true) {
          if (!in_union.contains(k | sub)) {
            inside = false;
            break;
          }
          if (sub == free) break;
          sub = (sub - free) & free;
        }
        if (inside) out.emplace_back(universe, a, b, k);
        if (k == rest) break;
        k = (k - rest) & rest;
      }
    }
  }
  return out;
}

}  // namespace ciimp
