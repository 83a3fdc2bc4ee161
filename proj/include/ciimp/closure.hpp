#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ciimp/statement.hpp"
#include "ciimp/universe.hpp"

namespace ciimp {

/// The closure fixpoint is exponential in the variable count, so it is capped
/// twice: by universe size and by total statements derived.
struct ClosureOptions {
  int max_vars = 6;
  std::size_t max_statements = 200'000;
};

namespace detail {

/// Applies decomposition and weak union to one statement, both side
/// orientations, single element at a time (iteration to fixpoint reaches
/// every subset split).
template <class Emit>
void closure_unary(const CIStatement& s, Emit&& emit) {
  const UniversePtr& u = s.universe();
  for (int orientation = 0; orientation < 2; ++orientation) {
    const std::uint32_t keep = orientation ? s.b_mask() : s.a_mask();
    const std::uint32_t split = orientation ? s.a_mask() : s.b_mask();
    if (std::popcount(split) < 2) continue;
    for (std::uint32_t rest = split; rest;) {
      const std::uint32_t bit = rest & (~rest + 1);
      rest &= rest - 1;
      emit(CIStatement(u, keep, split & ~bit, s.c_mask()));        // decomposition
      emit(CIStatement(u, keep, split & ~bit, s.c_mask() | bit));  // weak union
    }
  }
}

/// Contraction: I(A,B|C∪D) ∧ I(A,D|C) → I(A,B∪D|C), over the four ways the
/// stored side pairs can play the roles of A/B and A/D.
template <class Emit>
void closure_contraction(const CIStatement& s, const CIStatement& t, Emit&& emit) {
  const UniversePtr& u = s.universe();
  const std::uint32_t sa[2] = {s.a_mask(), s.b_mask()};
  const std::uint32_t ta[2] = {t.a_mask(), t.b_mask()};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::uint32_t common = sa[i], b = sa[1 - i], d = ta[1 - j];
      if (common != ta[j]) continue;
      if (s.c_mask() != (t.c_mask() | d) || (t.c_mask() & d) != 0) continue;
      emit(CIStatement(u, common, b | d, t.c_mask()));
    }
  }
}

}  // namespace detail

/// Least fixpoint of the semigraphoid rules (symmetry via canonical form,
/// decomposition, weak union, contraction) over the seed statements, in
/// canonical order. Throws when a cap is exceeded — no partial closure is
/// returned.
inline std::vector<CIStatement> semigraphoid_closure(std::span<const CIStatement> statements,
                                                     const ClosureOptions& opts = {}) {
  if (statements.empty()) return {};
  const UniversePtr& universe = statements.front().universe();
  if (universe->size() > opts.max_vars)
    throw std::length_error("semigraphoid closure over " + std::to_string(universe->size()) +
                            " variables exceeds the configured cap of " + std::to_string(opts.max_vars));
  for (const CIStatement& s : statements)
    if (!same_universe(s.universe(), universe))
      throw std::invalid_argument("semigraphoid_closure: statements over different universes");

  std::set<CIStatement> known;
  std::deque<CIStatement> work;
  const auto emit = [&](const CIStatement& s) {
    if (known.insert(s).second) {
      if (known.size() > opts.max_statements)
        throw std::length_error("semigraphoid closure exceeded the statement cap of " +
                                std::to_string(opts.max_statements));
      work.push_back(s);
    }
  };
  for (const CIStatement& s : statements) emit(s);
  while (!work.empty()) {
    const CIStatement s = work.front();
    work.pop_front();
    detail::closure_unary(s, emit);
    // Pair s against everything derived so far (including itself); later
    // arrivals will pair against s in their own turn.
    for (const CIStatement& t : known) {
      detail::closure_contraction(s, t, emit);
      detail::closure_contraction(t, s, emit);
    }
  }
  return std::vector<CIStatement>(known.begin(), known.end());
}

/// Membership of one statement in the closure of a set.
inline bool closure_contains(std::span<const CIStatement> statements, const CIStatement& target,
                             const ClosureOptions& opts = {}) {
  const std::vector<CIStatement> closed = semigraphoid_closure(statements, opts);
  return std::binary_search(closed.begin(), closed.end(), target);
}

}  // namespace ciimp
