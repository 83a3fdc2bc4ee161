#include <catch2/catch_amalgamated.hpp>

#include <ciimp/rng.hpp>
#include <ciimp/statement.hpp>

#include "helpers.hpp"

using namespace ciimp;

TEST_CASE("statement parsing reads the three sections") {
  auto u = letters_universe(4);

  CIStatement s = parse_statement("a ; b | c d", u);
  REQUIRE(s.a() == VarSet::from_names(u, {"a"}));
  REQUIRE(s.b() == VarSet::from_names(u, {"b"}));
  REQUIRE(s.c() == VarSet::from_names(u, {"c", "d"}));

  CIStatement empty_cond = parse_statement("c ; d |", u);
  REQUIRE(empty_cond.c().is_empty());

  // symmetry canonicalization: the side holding the smallest variable is first
  REQUIRE(parse_statement("b ; a | c", u) == parse_statement("a ; b | c", u));
  CIStatement swapped = parse_statement("b d ; a c |", u);
  REQUIRE(swapped.a() == VarSet::from_names(u, {"a", "c"}));
}

TEST_CASE("statement construction enforces the set contract") {
  auto u = letters_universe(4);
  REQUIRE_THROWS_AS(CIStatement(u, 0b0001, 0b0001, 0), std::invalid_argument);  // overlap
  REQUIRE_THROWS_AS(CIStatement(u, 0, 0b0010, 0), std::invalid_argument);       // empty side
  REQUIRE_THROWS_AS(CIStatement(u, 0b0001, 0b0010, 0b0010), std::invalid_argument);
  REQUIRE_THROWS_AS(CIStatement(u, 0b10000, 0b0010, 0), std::invalid_argument); // out of range

  REQUIRE(CIStatement(u, 0b0001, 0b0010, 0).elementary());
  REQUIRE_FALSE(CIStatement(u, 0b0011, 0b0100, 0).elementary());
}

TEST_CASE("parse errors carry positions") {
  auto u = letters_universe(4);

  auto offset_of = [&](const char* text) {
    try {
      parse_statement(text, u);
    } catch (const ParseError& e) {
      return e.offset();
    }
    FAIL("expected a parse error");
    return std::size_t{0};
  };

  REQUIRE(offset_of("a ; z | c") == 4);      // unknown variable
  REQUIRE(offset_of("a ; a | c") == 4);      // two sets
  REQUIRE(offset_of("a a ; b |") == 2);      // repeated in one set
  REQUIRE(offset_of("; b | c") == 0);        // empty first side
  REQUIRE(offset_of("a ; | c") == 4);        // empty second side
  REQUIRE_THROWS_AS(parse_statement("a b c", u), ParseError);     // no ';'
  REQUIRE_THROWS_AS(parse_statement("a ; b c", u), ParseError);   // no '|'
  REQUIRE_THROWS_AS(parse_statement("a | b ; c", u), ParseError); // '|' first
  REQUIRE_THROWS_AS(parse_statement("a ; b ; c |", u), ParseError);
}

TEST_CASE("comments end the statement text") {
  auto u = letters_universe(4);
  REQUIRE(parse_statement("a ; b | c # trailing note", u) == parse_statement("a ; b | c", u));
}

TEST_CASE("format round-trips through parse") {
  auto u5 = letters_universe(5);
  Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    CIStatement s = testutil::random_statement(rng, u5);
    CIStatement back = parse_statement(format_statement(s), u5);
    REQUIRE(back == s);
  }
  REQUIRE(format_statement(parse_statement("c ; d |", u5)) == "c ; d |");
  REQUIRE(statement_display(parse_statement("b ; a | c", u5)) == "I(a ; b | c)");
}

TEST_CASE("statement ordering is total and canonical") {
  auto u = letters_universe(4);
  CIStatement x = parse_statement("a ; b |", u);
  CIStatement y = parse_statement("a ; b | c", u);
  CIStatement z = parse_statement("a ; c |", u);
  REQUIRE(x < y);
  REQUIRE(y < z);
  REQUIRE_FALSE(z < x);
}
