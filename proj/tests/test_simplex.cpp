#include <catch2/catch_amalgamated.hpp>

#include <ciimp/rng.hpp>
#include <ciimp/simplex.hpp>

#include "helpers.hpp"

using namespace ciimp;
using detail::SmallRational;

namespace {

Rational widened(const SmallRational& r) { return Rational(r.num(), r.den()); }

SparseBinaryMatrix random_matrix(Rng& rng, int m, int n) {
  std::vector<std::vector<int>> cols(n);
  for (auto& col : cols) {
    for (int r = 0; r < m; ++r)
      if (rng.below(2)) col.push_back(r);
    if (col.empty()) col.push_back(static_cast<int>(rng.below(m)));
  }
  return SparseBinaryMatrix(m, std::move(cols));
}

}  // namespace

TEST_CASE("small rationals stay reduced and match wide arithmetic") {
  Rng rng(61);
  for (int t = 0; t < 3000; ++t) {
    const long long an = rng.range(-1000, 1000), ad = rng.range(1, 60);
    const long long bn = rng.range(-1000, 1000), bd = rng.range(1, 60);
    SmallRational a = SmallRational::from_parts(an, ad);
    SmallRational b = SmallRational::from_parts(bn, bd);
    Rational wa(an, ad), wb(bn, bd);
    REQUIRE(widened(a + b) == wa + wb);
    REQUIRE(widened(a - b) == wa - wb);
    REQUIRE(widened(a * b) == wa * wb);
    if (bn != 0) REQUIRE(widened(a / b) == wa / wb);
    REQUIRE((a < b) == (wa < wb));
    REQUIRE((a == b) == (wa == wb));
    // canonical storage: reduced, positive denominator
    REQUIRE(std::gcd(a.num() < 0 ? -a.num() : a.num(), a.den()) <= 1);
    REQUIRE(a.den() > 0);
  }
}

TEST_CASE("small rationals overflow loudly, never silently") {
  const long long big = INT64_MAX / 2;
  SmallRational x = SmallRational::from_parts(big, 1);
  SmallRational y = SmallRational::from_parts(big, 3);
  REQUIRE_THROWS_AS(x * y, detail::SmallRationalOverflow);
  REQUIRE_THROWS_AS(x + x + x, detail::SmallRationalOverflow);
  REQUIRE_THROWS_AS(SmallRational(INT64_MIN), detail::SmallRationalOverflow);
  REQUIRE(SmallRational::from_parts(INT64_MAX, 1).num() == INT64_MAX);
  // reduction can rescue large intermediates
  REQUIRE(SmallRational::from_parts(static_cast<__int128>(big) * 6, static_cast<__int128>(big) * 2) ==
          SmallRational(3));
  REQUIRE_THROWS_AS(SmallRational::from_parts(1, 0), std::domain_error);
  SmallRational zero;
  REQUIRE_THROWS_AS(x / zero, std::domain_error);
}

TEST_CASE("feasible textbook systems solve exactly") {
  // two unit columns
  SparseBinaryMatrix ident(2, {{0}, {1}});
  const long long b_id[] = {1, 1};
  FeasibilityOutcome r = lp_feasible(ident, b_id);
  REQUIRE(r.feasible);
  REQUIRE(r.solution.value() == std::vector<Rational>{1, 1});
  REQUIRE(verify_solution(ident, b_id, *r.solution));

  // a column that never covers the row
  SparseBinaryMatrix zero_col(1, {std::vector<int>{}});
  const long long b_one[] = {1};
  REQUIRE_FALSE(lp_feasible(zero_col, b_one).feasible);

  // empty system edge cases
  SparseBinaryMatrix empty(0, {});
  REQUIRE(lp_feasible(empty, {}).feasible);
  SparseBinaryMatrix no_cols(1, {});
  const long long b_zero[] = {0};
  REQUIRE(lp_feasible(no_cols, b_zero).feasible);
  REQUIRE_FALSE(lp_feasible(no_cols, b_one).feasible);
}

TEST_CASE("solver rejects malformed input") {
  SparseBinaryMatrix ident(2, {{0}, {1}});
  const long long short_b[] = {1};
  REQUIRE_THROWS_AS(lp_feasible(ident, short_b), std::invalid_argument);
  const long long negative[] = {1, -1};
  REQUIRE_THROWS_AS(lp_feasible(ident, negative), std::invalid_argument);
  REQUIRE_THROWS_AS(SparseBinaryMatrix(2, {{0, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(SparseBinaryMatrix(2, {{1, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(SparseBinaryMatrix(2, {{2}}), std::invalid_argument);
}

TEST_CASE("random small systems agree with basic-solution enumeration") {
  Rng rng(62);
  int feasible_seen = 0, infeasible_seen = 0;
  for (int t = 0; t < 400; ++t) {
    const int m = 1 + static_cast<int>(rng.below(5));
    const int n = 1 + static_cast<int>(rng.below(6));
    SparseBinaryMatrix A = random_matrix(rng, m, n);
    std::vector<long long> b(m);
    for (auto& v : b) v = static_cast<long long>(rng.below(4));
    FeasibilityOutcome got = lp_feasible(A, b);
    const bool expect = testutil::lp_feasible_oracle(A, b);
    REQUIRE(got.feasible == expect);
    if (expect) {
      REQUIRE(verify_solution(A, b, got.solution.value()));
      ++feasible_seen;
    } else {
      REQUIRE_FALSE(got.solution.has_value());
      ++infeasible_seen;
    }
  }
  REQUIRE(feasible_seen > 50);
  REQUIRE(infeasible_seen > 50);
}

TEST_CASE("identical inputs give identical solutions") {
  Rng rng(63);
  for (int t = 0; t < 40; ++t) {
    SparseBinaryMatrix A = random_matrix(rng, 4, 6);
    std::vector<long long> b(4);
    for (auto& v : b) v = static_cast<long long>(rng.below(3));
    FeasibilityOutcome first = lp_feasible(A, b);
    FeasibilityOutcome second = lp_feasible(A, b);
    REQUIRE(first.feasible == second.feasible);
    REQUIRE(first.solution == second.solution);
  }
}

TEST_CASE("entering hints change neither outcome nor validity") {
  Rng rng(64);
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + static_cast<int>(rng.below(4));
    const int n = 2 + static_cast<int>(rng.below(5));
    SparseBinaryMatrix A = random_matrix(rng, m, n);
    std::vector<long long> b(m);
    for (auto& v : b) v = static_cast<long long>(rng.below(3));
    std::vector<int> hints;
    for (int j = 0; j < n; ++j)
      if (rng.below(2)) hints.push_back(j);
    FeasibilityOutcome plain = lp_feasible(A, b);
    FeasibilityOutcome hinted = lp_feasible(A, b, hints);
    REQUIRE(plain.feasible == hinted.feasible);
    if (hinted.feasible) REQUIRE(verify_solution(A, b, hinted.solution.value()));
  }
}

TEST_CASE("chained substitutions decide a triangular system") {
  // x0 = 2, then x0 + x1 = 3 pins x1 = 1, then x1 + x2 = 1 pins x2 = 0
  SparseBinaryMatrix A(3, {{0, 1}, {1, 2}, {2}});
  const long long b[] = {2, 3, 1};
  FeasibilityOutcome r = lp_feasible(A, b);
  REQUIRE(r.feasible);
  REQUIRE(r.solution.value() == std::vector<Rational>{2, 1, 0});
  REQUIRE(verify_solution(A, b, *r.solution));
}

TEST_CASE("a zero right-hand side pins its columns at zero") {
  // row 0 has b = 0, so x0 = x1 = 0 and row 1 leaves x2 = 1
  SparseBinaryMatrix A(2, {{0}, {0, 1}, {1}});
  const long long b[] = {0, 1};
  FeasibilityOutcome r = lp_feasible(A, b);
  REQUIRE(r.feasible);
  REQUIRE(r.solution.value() == std::vector<Rational>{0, 0, 1});
  REQUIRE(verify_solution(A, b, *r.solution));
}

TEST_CASE("contradictory rows are recognized as infeasible") {
  // identical patterns, different right-hand sides
  SparseBinaryMatrix dup(2, {{0, 1}, {0, 1}});
  const long long b_dup[] = {1, 2};
  REQUIRE_FALSE(lp_feasible(dup, b_dup).feasible);

  // containment: x0 + x1 = 3 inside x0 + x1 + x2 = 2 leaves x2 = -1
  SparseBinaryMatrix nest(2, {{0, 1}, {0, 1}, {1}});
  const long long b_nest[] = {3, 2};
  REQUIRE_FALSE(lp_feasible(nest, b_nest).feasible);
}

TEST_CASE("containment subtraction pins the difference column") {
  // x0 + x1 = 2 inside x0 + x1 + x2 = 5 forces x2 = 3
  SparseBinaryMatrix A(2, {{0, 1}, {0, 1}, {1}});
  const long long b[] = {2, 5};
  FeasibilityOutcome r = lp_feasible(A, b);
  REQUIRE(r.feasible);
  REQUIRE(r.solution.value()[2] == 3);
  REQUIRE(verify_solution(A, b, *r.solution));
}

TEST_CASE("presolve and the bare tableau agree everywhere") {
  constexpr LpOptions bare{.presolve = false};
  Rng rng(66);
  for (int t = 0; t < 300; ++t) {
    const int m = 1 + static_cast<int>(rng.below(6));
    const int n = 1 + static_cast<int>(rng.below(7));
    SparseBinaryMatrix A = random_matrix(rng, m, n);
    std::vector<long long> b(m);
    for (auto& v : b) v = static_cast<long long>(rng.below(4));
    FeasibilityOutcome with = lp_feasible(A, b);
    FeasibilityOutcome without = lp_feasible(A, b, {}, bare);
    REQUIRE(with.feasible == without.feasible);
    if (with.feasible) {
      REQUIRE(verify_solution(A, b, with.solution.value()));
      REQUIRE(verify_solution(A, b, without.solution.value()));
    }
  }
}

TEST_CASE("solution checker is strict") {
  SparseBinaryMatrix ident(2, {{0}, {1}});
  const long long b[] = {1, 1};
  REQUIRE_FALSE(verify_solution(ident, b, std::vector<Rational>{Rational(0), Rational(0)}));
  REQUIRE_FALSE(verify_solution(ident, b, std::vector<Rational>{Rational(2), Rational(-1) + Rational(1)}));
  REQUIRE_FALSE(verify_solution(ident, b, std::vector<Rational>{Rational(1)}));
  std::vector<Rational> negative{Rational(1), Rational(-1)};
  const long long b2[] = {1, -1};
  REQUIRE_FALSE(verify_solution(ident, b2, negative));
}

TEST_CASE("wide-rational tableau matches the fast path") {
  Rng rng(65);
  for (int t = 0; t < 50; ++t) {
    const int m = 2 + static_cast<int>(rng.below(4));
    const int n = 2 + static_cast<int>(rng.below(5));
    SparseBinaryMatrix A = random_matrix(rng, m, n);
    std::vector<long long> b(m);
    for (auto& v : b) v = static_cast<long long>(rng.below(3));
    detail::PhaseOneTableau<detail::SmallRational> fast(A, b);
    detail::PhaseOneTableau<Rational> wide(A, b);
    const bool ff = fast.solve({});
    const bool wf = wide.solve({});
    REQUIRE(ff == wf);
    if (ff) REQUIRE(fast.solution() == wide.solution());
  }
}
