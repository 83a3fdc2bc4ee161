#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include <ciimp/closure.hpp>
#include <ciimp/joint_table.hpp>
#include <ciimp/rng.hpp>
#include <ciimp/semilattice.hpp>

#include "helpers.hpp"

using namespace ciimp;

namespace {

// Whole-set fixpoint with subset-level splits: recompute every consequence of
// the full set until a pass adds nothing. Slower than the worklist but checks
// that single-element splitting plus iteration reaches every subset split.
std::set<CIStatement> closure_oracle(std::span<const CIStatement> seeds) {
  const UniversePtr& u = seeds.front().universe();
  std::set<CIStatement> out(seeds.begin(), seeds.end());
  bool changed = true;
  while (changed) {
    changed = false;
    const std::vector<CIStatement> snapshot(out.begin(), out.end());
    const auto add = [&](const CIStatement& s) { changed = out.insert(s).second || changed; };
    for (const CIStatement& s : snapshot) {
      const std::uint32_t sides[2] = {s.a_mask(), s.b_mask()};
      for (int o = 0; o < 2; ++o) {
        const std::uint32_t keep = sides[1 - o], split = sides[o];
        for (std::uint32_t sub = (split - 1) & split; sub; sub = (sub - 1) & split) {
          add(CIStatement(u, keep, sub, s.c_mask()));                   // decomposition
          add(CIStatement(u, keep, sub, s.c_mask() | (split & ~sub)));  // weak union
        }
      }
      for (const CIStatement& t : snapshot) {
        const std::uint32_t ts[2] = {t.a_mask(), t.b_mask()};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const std::uint32_t common = sides[i], b = sides[1 - i], d = ts[1 - j];
            if (common != ts[j] || (t.c_mask() & d) != 0) continue;
            if (s.c_mask() != (t.c_mask() | d)) continue;
            add(CIStatement(u, common, b | d, t.c_mask()));  // contraction
          }
      }
    }
  }
  return out;
}

std::vector<std::pair<int, int>> random_dag(Rng& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.below(2)) edges.emplace_back(i, j);
  return edges;
}

}  // namespace

TEST_CASE("splitting one side derives the four expected statements") {
  auto u = letters_universe(3);
  const std::vector<CIStatement> seeds = {parse_statement("a ; b c |", u)};
  const std::vector<CIStatement> closed = semigraphoid_closure(seeds);
  const std::vector<CIStatement> expected = {
      parse_statement("a ; b |", u),   parse_statement("a ; b | c", u),
      parse_statement("a ; c |", u),   parse_statement("a ; c | b", u),
      parse_statement("a ; b c |", u)};
  REQUIRE(closed.size() == 5);
  for (const CIStatement& s : expected)
    REQUIRE(std::binary_search(closed.begin(), closed.end(), s));
}

TEST_CASE("contraction merges a pair into a wider statement") {
  auto u = letters_universe(4);
  const std::vector<CIStatement> seeds = {parse_statement("a ; b | c d", u),
                                          parse_statement("a ; d | c", u)};
  const std::vector<CIStatement> closed = semigraphoid_closure(seeds);
  // Seeds, the contraction, its two splits, and the re-split I(a ; d | b c).
  REQUIRE(closed.size() == 5);
  REQUIRE(closure_contains(seeds, parse_statement("a ; b d | c", u)));
  REQUIRE(closure_contains(seeds, parse_statement("a ; b | c", u)));
  REQUIRE(closure_contains(seeds, parse_statement("a ; d | b c", u)));
  REQUIRE_FALSE(closure_contains(seeds, parse_statement("a ; b |", u)));
}

TEST_CASE("the closure contains its seeds, stays canonical, and is idempotent") {
  Rng rng(83);
  for (int t = 0; t < 20; ++t) {
    auto u = letters_universe(3 + static_cast<int>(rng.below(2)));
    std::vector<CIStatement> seeds;
    for (int i = 0; i < 2; ++i) seeds.push_back(testutil::random_statement(rng, u));
    const std::vector<CIStatement> closed = semigraphoid_closure(seeds);
    REQUIRE(std::is_sorted(closed.begin(), closed.end()));
    REQUIRE(std::adjacent_find(closed.begin(), closed.end()) == closed.end());
    for (const CIStatement& s : seeds)
      REQUIRE(std::binary_search(closed.begin(), closed.end(), s));
    REQUIRE(semigraphoid_closure(closed) == closed);
  }
  // Symmetry is the canonical form, so flipped seeds close identically.
  auto u = letters_universe(3);
  REQUIRE(semigraphoid_closure(std::vector{parse_statement("b c ; a |", u)}) ==
          semigraphoid_closure(std::vector{parse_statement("a ; b c |", u)}));
}

TEST_CASE("the worklist closure matches a whole-set fixpoint") {
  Rng rng(84);
  for (int t = 0; t < 45; ++t) {
    auto u = letters_universe(t % 3 == 0 ? 4 : 3);
    std::vector<CIStatement> seeds;
    const int k = 1 + static_cast<int>(rng.below(2));
    for (int i = 0; i < k; ++i) seeds.push_back(testutil::random_statement(rng, u));
    const std::vector<CIStatement> closed = semigraphoid_closure(seeds);
    const std::set<CIStatement> expected = closure_oracle(seeds);
    REQUIRE(closed == std::vector<CIStatement>(expected.begin(), expected.end()));
  }
}

TEST_CASE("the worked instance's conclusion is out of the closure's reach") {
  auto u = letters_universe(4);
  const std::vector<CIStatement> C = {
      parse_statement("a ; b |", u), parse_statement("c ; d | a", u),
      parse_statement("c ; d | b", u), parse_statement("a ; b | c d", u)};
  // No rule applies to these four statements at all, so the closure is the
  // seed set itself and the (rationally certifiable) conclusion stays out.
  REQUIRE(semigraphoid_closure(C).size() == 4);
  REQUIRE_FALSE(closure_contains(C, parse_statement("c ; d |", u)));
  REQUIRE(closure_contains(C, parse_statement("c ; d | a", u)));
}

TEST_CASE("closure statements hold in every measure satisfying the seeds") {
  Rng rng(85);
  auto u = letters_universe(4);
  for (int t = 0; t < 8; ++t) {
    const JointTable P = random_factorized_table(u, random_dag(rng, 4), 900 + t);
    std::vector<CIStatement> seeds;
    for (const CIStatement& e : enumerate_elementary(u))
      if (satisfies(P, e)) seeds.push_back(e);
    if (seeds.empty()) continue;
    for (const CIStatement& s : semigraphoid_closure(seeds)) REQUIRE(satisfies(P, s));
  }
}

TEST_CASE("closure caps and input errors") {
  auto u7 = letters_universe(7);
  const std::vector<CIStatement> one = {parse_statement("a ; b | c", u7)};
  REQUIRE_THROWS_AS(semigraphoid_closure(one), std::length_error);
  REQUIRE(semigraphoid_closure(one, ClosureOptions{.max_vars = 7}) == one);

  auto u3 = letters_universe(3);
  const std::vector<CIStatement> wide = {parse_statement("a ; b c |", u3)};
  ClosureOptions tight;
  tight.max_statements = 2;
  REQUIRE_THROWS_AS(semigraphoid_closure(wide, tight), std::length_error);

  const std::vector<CIStatement> mixed = {parse_statement("a ; b | c", u3),
                                          parse_statement("a ; b | c", letters_universe(4))};
  REQUIRE_THROWS_AS(semigraphoid_closure(mixed), std::invalid_argument);

  REQUIRE(semigraphoid_closure({}).empty());
  REQUIRE_FALSE(closure_contains({}, parse_statement("a ; b | c", u3)));
}
