#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ciimp {

/// An ordered list of distinct variable names. Subsets of the universe are
/// represented as n-bit masks throughout the library (bit i = variable i),
/// which bounds the universe size at 30 so every subset fits a machine word.
class VarUniverse {
 public:
  static constexpr int kMaxVars = 30;

  explicit VarUniverse(std::vector<std::string> names) : names_(std::move(names)) {
    const int n = static_cast<int>(names_.size());
    if (n < 2) throw std::invalid_argument("universe needs at least 2 variables");
    if (n > kMaxVars) throw std::invalid_argument("universe exceeds " + std::to_string(kMaxVars) + " variables");
    for (int i = 0; i < n; ++i) {
      const std::string& name = names_[i];
      if (name.empty()) throw std::invalid_argument("empty variable name");
      for (char ch : name) {
        const bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') ||
                        (ch >= '0' && ch <= '9') || ch == '_';
        if (!ok) throw std::invalid_argument("invalid character in variable name '" + name + "'");
      }
      if (!index_.emplace(name, i).second)
        throw std::invalid_argument("duplicate variable name '" + name + "'");
    }
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<int> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t full_mask() const { return (std::uint32_t{1} << size()) - 1; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

using UniversePtr = std::shared_ptr<const VarUniverse>;

inline UniversePtr make_universe(std::vector<std::string> names) {
  return std::make_shared<const VarUniverse>(std::move(names));
}

/// Universe named a, b, c, ... for n <= 26, otherwise v0, v1, ...
inline UniversePtr letters_universe(int n) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (n <= 26)
      names.emplace_back(1, static_cast<char>('a' + i));
    else
      names.push_back("v" + std::to_string(i));
  }
  return make_universe(std::move(names));
}

/// Universes compare by content so that independently parsed files interoperate.
inline bool same_universe(const VarUniverse& a, const VarUniverse& b) {
  return &a == &b || a.names() == b.names();
}

inline bool same_universe(const UniversePtr& a, const UniversePtr& b) {
  if (!a || !b) throw std::invalid_argument("null universe");
  return same_universe(*a, *b);
}

/// Immutable subset of a universe, stored as a bit mask.
class VarSet {
 public:
  VarSet() = default;

  VarSet(UniversePtr universe, std::uint32_t mask) : universe_(std::move(universe)), mask_(mask) {
    if (!universe_) throw std::invalid_argument("VarSet: null universe");
    if (mask & ~universe_->full_mask()) throw std::invalid_argument("VarSet: mask out of range");
  }

  static VarSet empty(UniversePtr universe) { return VarSet(std::move(universe), 0); }

  static VarSet full(UniversePtr universe) {
    std::uint32_t m = universe->full_mask();
    return VarSet(std::move(universe), m);
  }

  static VarSet from_names(UniversePtr universe, const std::vector<std::string>& names) {
    std::uint32_t mask = 0;
    for (const auto& name : names) {
      auto idx = universe->index_of(name);
      if (!idx) throw std::invalid_argument("unknown variable '" + name + "'");
      mask |= std::uint32_t{1} << *idx;
    }
    return VarSet(std::move(universe), mask);
  }

  const UniversePtr& universe() const { return universe_; }
  std::uint32_t mask() const { return mask_; }
  bool is_empty() const { return mask_ == 0; }
  int size() const { return std::popcount(mask_); }
  bool contains(int i) const { return (mask_ >> i) & 1u; }
  bool subset_of(const VarSet& o) const { return (mask_ & ~o.mask_) == 0; }
  bool disjoint_with(const VarSet& o) const { return (mask_ & o.mask_) == 0; }

  VarSet set_union(const VarSet& o) const { return with_mask(mask_ | o.mask_); }
  VarSet set_intersection(const VarSet& o) const { return with_mask(mask_ & o.mask_); }
  VarSet set_minus(const VarSet& o) const { return with_mask(mask_ & ~o.mask_); }
  VarSet complement() const { return with_mask(universe_->full_mask() & ~mask_); }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 0; i < universe_->size(); ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  /// Member equality over the same universe (by content).
  friend bool operator==(const VarSet& a, const VarSet& b) {
    if (!a.universe_ || !b.universe_) return a.mask_ == b.mask_ && !a.universe_ == !b.universe_;
    return same_universe(a.universe_, b.universe_) && a.mask_ == b.mask_;
  }

  /// Canonical subset ordering: by mask as an integer.
  friend bool operator<(const VarSet& a, const VarSet& b) { return a.mask_ < b.mask_; }

  /// Space-separated member names in index order; "" for the empty set.
  std::string to_names() const {
    std::string out;
    for (int i : indices()) {
      if (!out.empty()) out += ' ';
      out += universe_->name(i);
    }
    return out;
  }

  /// Brace form for display, e.g. "{c,d}" or "{}".
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (int i : indices()) {
      if (!first) out += ',';
      out += universe_->name(i);
      first = false;
    }
    out += '}';
    return out;
  }

 private:
  VarSet with_mask(std::uint32_t m) const { return VarSet(universe_, m); }

  UniversePtr universe_;
  std::uint32_t mask_ = 0;
};

}  // namespace ciimp
