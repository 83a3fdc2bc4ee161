#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ciimp/semilattice.hpp"
#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

/// A real- or rational-valued function on all subsets of the universe, stored
/// densely by mask. The scalar type selects the numeric mode: Rational for
/// exact work, double for entropy-style quantities.
template <class T>
class SetFunction {
 public:
  explicit SetFunction(UniversePtr universe)
      : universe_(std::move(universe)) {
    if (!universe_) throw std::invalid_argument("SetFunction: null universe");
    if (universe_->size() > 25) throw std::length_error("SetFunction: universe too large to store densely");
    values_.assign(std::size_t{1} << universe_->size(), T{});
  }

  const UniversePtr& universe() const { return universe_; }
  std::size_t size() const { return values_.size(); }

  T& operator[](std::uint32_t mask) { return values_[mask]; }
  const T& operator[](std::uint32_t mask) const { return values_[mask]; }

  T& at(std::uint32_t mask) { return values_.at(mask); }
  const T& at(std::uint32_t mask) const { return values_.at(mask); }

 private:
  UniversePtr universe_;
  std::vector<T> values_;
};

/// The superset Moebius transform: out(X) = sum over U ⊇ X of
/// (-1)^(|U|-|X|) * f(U). Computed bit by bit in n * 2^n scalar operations;
/// inverts the superset sum transform.
template <class T>
SetFunction<T> mobius_inversion(const SetFunction<T>& f) {
  SetFunction<T> out = f;
  const int n = f.universe()->size();
  const std::size_t total = std::size_t{1} << n;
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t m = 0; m < total; ++m)
      if (!(m & bit)) out[m] -= out[m | bit];
  }
  return out;
}

template <class T>
struct LatticeSumSides {
  T lhs;  // f(ABC) + f(C) - f(AC) - f(BC)
  T rhs;  // sum of the Moebius transform of f over the lattice members
};

/// Evaluates both sides of the identity that ties a statement's four-term
/// functional to its interval structure: the four-term combination on the left
/// equals the sum of Moebius increments over exactly the lattice of the
/// statement. Callers compare the sides (exactly or within tolerance).
template <class T>
LatticeSumSides<T> lattice_sum_check(const SetFunction<T>& f, const CIStatement& s,
                                     const SemiLattice& lattice) {
  if (!same_universe(f.universe(), s.universe()) || !same_universe(f.universe(), lattice.universe()))
    throw std::invalid_argument("lattice_sum_check: mismatched universes");
  const std::uint32_t a = s.a_mask(), b = s.b_mask(), c = s.c_mask();
  LatticeSumSides<T> sides{};
  sides.lhs = f[a | b | c];
  sides.lhs += f[c];
  sides.lhs -= f[a | c];
  sides.lhs -= f[b | c];
  const SetFunction<T> delta = mobius_inversion(f);
  sides.rhs = T{};
  for (std::uint32_t m : lattice.masks()) sides.rhs += delta[m];
  return sides;
}

}  // namespace ciimp
