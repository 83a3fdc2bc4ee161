#include <algorithm>
#include <map>

#include <catch2/catch_amalgamated.hpp>

#include <ciimp/rng.hpp>
#include <ciimp/semilattice.hpp>

#include "helpers.hpp"

using namespace ciimp;

namespace {

std::vector<std::uint32_t> masks_of(const SemiLattice& l) { return l.masks(); }

}  // namespace

TEST_CASE("single-statement lattices match the definition") {
  auto u = letters_universe(4);
  // {U : C ⊆ U, A ⊄ U, B ⊄ U}
  REQUIRE(masks_of(semi_lattice(parse_statement("a ; b | c d", u))) ==
          std::vector<std::uint32_t>{0b1100});
  REQUIRE(masks_of(semi_lattice(parse_statement("a ; b d | c", u))) ==
          std::vector<std::uint32_t>{0b0100, 0b0110, 0b1100});

  auto u2 = letters_universe(2);
  REQUIRE(masks_of(semi_lattice(parse_statement("a ; b |", u2))) ==
          std::vector<std::uint32_t>{0});
}

TEST_CASE("lattice is symmetric in the two independent sides") {
  auto u = letters_universe(5);
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    CIStatement s = testutil::random_statement(rng, u);
    CIStatement flipped(s.b(), s.a(), s.c());
    REQUIRE(masks_of(semi_lattice(s)) == masks_of(semi_lattice(flipped)));
  }
}

TEST_CASE("lattice enumeration agrees with the full-subset-scan oracle") {
  Rng rng(12);
  for (int n : {3, 4, 5, 6}) {
    auto u = letters_universe(n);
    for (int t = 0; t < 40; ++t) {
      CIStatement s = testutil::random_statement(rng, u);
      REQUIRE(masks_of(semi_lattice(s)) == testutil::lattice_masks_oracle(s));
    }
  }
}

TEST_CASE("elementary lattices are exactly conditioning intervals") {
  Rng rng(13);
  for (int n : {4, 5}) {
    auto u = letters_universe(n);
    for (int t = 0; t < 60; ++t) {
      CIStatement s = testutil::random_elementary(rng, u);
      // independent interval scan [K, S∖{a,b}]
      std::vector<std::uint32_t> interval;
      const std::uint32_t k = s.c_mask(), ab = s.a_mask() | s.b_mask();
      for (std::uint32_t m = 0; m <= u->full_mask(); ++m)
        if ((m & k) == k && (m & ab) == 0) interval.push_back(m);
      REQUIRE(masks_of(semi_lattice(s)) == interval);
    }
  }
}

TEST_CASE("union lattice merges and orders canonically") {
  auto u = letters_universe(4);
  std::vector<CIStatement> two = {parse_statement("a ; b | c d", u),
                                  parse_statement("a ; d | b c", u)};
  REQUIRE(masks_of(semi_lattice_union(two)) == std::vector<std::uint32_t>{0b0110, 0b1100});

  std::vector<CIStatement> four = {
      parse_statement("a ; b |", u), parse_statement("c ; d | a", u),
      parse_statement("c ; d | b", u), parse_statement("a ; b | c d", u)};
  REQUIRE(masks_of(semi_lattice_union(four)) ==
          std::vector<std::uint32_t>{0, 0b0001, 0b0010, 0b0011, 0b0100, 0b1000, 0b1100});

  std::vector<CIStatement> one = {two[0]};
  REQUIRE(masks_of(semi_lattice_union(one)) == masks_of(semi_lattice(two[0])));

  std::vector<CIStatement> empty;
  REQUIRE_THROWS_AS(semi_lattice_union(empty), std::invalid_argument);

  std::vector<CIStatement> mixed = {two[0], parse_statement("a ; b |", letters_universe(5))};
  REQUIRE_THROWS_AS(semi_lattice_union(mixed), std::invalid_argument);
}

TEST_CASE("all-elementary union reaches every subset missing two or more variables") {
  for (int n : {3, 4, 5, 6}) {
    auto u = letters_universe(n);
    std::vector<CIStatement> all = enumerate_elementary(u);
    REQUIRE(semi_lattice_union(all).size() == (std::size_t{1} << n) - n - 1);
  }
}

TEST_CASE("elementary enumeration is complete, canonical, and counted") {
  REQUIRE(enumerate_elementary(letters_universe(2)).size() == 1);
  REQUIRE(enumerate_elementary(letters_universe(4)).size() == 24);
  REQUIRE(enumerate_elementary(letters_universe(5)).size() == 80);

  auto u = letters_universe(5);
  std::vector<CIStatement> all = enumerate_elementary(u);
  REQUIRE(std::is_sorted(all.begin(), all.end()));
  REQUIRE(std::adjacent_find(all.begin(), all.end()) == all.end());
  for (const CIStatement& s : all) REQUIRE(s.elementary());

  // independent count oracle: brute force over (i, j, K) triples
  std::size_t count = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (std::uint32_t k = 0; k <= u->full_mask(); ++k)
        if ((k & ((1u << i) | (1u << j))) == 0) ++count;
  REQUIRE(all.size() == count);
}

TEST_CASE("statement decomposition partitions its lattice into elementary pieces") {
  Rng rng(14);
  for (int n : {3, 4, 5, 6}) {
    auto u = letters_universe(n);
    for (int t = 0; t < 40; ++t) {
      CIStatement s = testutil::random_statement(rng, u);
      std::vector<CIStatement> pieces = elementary_decomposition(s);
      REQUIRE(pieces.size() == static_cast<std::size_t>(s.a().size()) * s.b().size());
      std::map<std::uint32_t, int> covered;
      for (const CIStatement& p : pieces) {
        REQUIRE(p.elementary());
        for (std::uint32_t m : testutil::lattice_masks_oracle(p)) ++covered[m];
      }
      std::map<std::uint32_t, int> expected;
      for (std::uint32_t m : testutil::lattice_masks_oracle(s)) expected[m] = 1;
      REQUIRE(covered == expected);  // disjoint and exhaustive
    }
  }
}

TEST_CASE("lattice membership and inclusion agree with set oracles") {
  auto u = letters_universe(5);
  Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    std::vector<CIStatement> family;
    for (int i = 0; i < 3; ++i) family.push_back(testutil::random_statement(rng, u));
    SemiLattice big = semi_lattice_union(family);
    for (std::uint32_t m = 0; m <= u->full_mask(); ++m)
      REQUIRE(big.contains(m) == testutil::in_lattice_union(family, m));
    SemiLattice small = semi_lattice(family[0]);
    bool expect = true;
    for (std::uint32_t m : small.masks()) expect = expect && big.contains(m);
    REQUIRE(big.includes(small) == expect);
  }
}

TEST_CASE("enumeration cap guards large universes") {
  auto u = letters_universe(21);
  REQUIRE_THROWS_AS(semi_lattice(parse_statement("a ; b |", u)), std::length_error);
  EnumOptions raised;
  raised.max_enum_vars = 21;
  REQUIRE(semi_lattice(parse_statement("a ; b |", u), raised).size() == (1u << 19));
}
