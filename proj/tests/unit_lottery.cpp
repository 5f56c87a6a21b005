#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "wcg/lottery.hpp"
#include "wcg/profiles.hpp"

using namespace wcg;

TEST_CASE("partial sums") {
  auto v = vt(3, 6);
  CHECK(partial_sum(v, 1, 2) == Rational(1, 3));
  CHECK(partial_sum(v, 1, 6) == 1);
  CHECK(partial_sum(uniform(6), 1, 3) == Rational(1, 2));
  CHECK_THROWS_AS(partial_sum(v, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(partial_sum(v, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(partial_sum(v, 1, 7), std::invalid_argument);
}

TEST_CASE("named guarantees") {
  CHECK(to_string(vt(3, 6)) == "0,1/3,1/3,1/3,0,0");
  CHECK(to_string(rd(3, 6)) == "1/3,1/3,0,0,0,1/3");
  CHECK(to_string(rd(2, 6)) == "1/2,0,0,0,0,1/2");
  CHECK(to_string(uniform(4)) == "1/4,1/4,1/4,1/4");
  CHECK_THROWS_AS(vt(6, 6), std::invalid_argument);
  CHECK_THROWS_AS(rd(7, 6), std::invalid_argument);
}

TEST_CASE("reflection") {
  CHECK(reflect(vt(3, 6)) == parse_lottery("0,0,1/3,1/3,1/3,0"));
  CHECK(reflect(uniform(5)) == uniform(5));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto l = testutil::random_lottery(1 + i % 9, rng);
    CHECK(reflect(reflect(l)) == l);
  }
  // Among the named constructors only the uniform lottery is a fixed point
  // once n >= 3 (for two agents vt and rd are themselves symmetric).
  for (std::size_t p = 4; p <= 9; ++p) {
    for (std::size_t n = 3; n < p; ++n) {
      CHECK(reflect(vt(n, p)) != vt(n, p));
      CHECK(reflect(rd(n, p)) != rd(n, p));
    }
  }
  CHECK(is_symmetric(vt(2, 6)));
  CHECK(is_symmetric(rd(2, 6)));
}

TEST_CASE("dominance examples") {
  CHECK(dominates(vt(3, 6), parse_lottery("0,1,0,0,0,0")));
  CHECK(dominates(vt(3, 6), vt(3, 6)));
  CHECK(dominates(uniform(6), parse_lottery("1/6,1/3,1/6,1/6,0,1/6")));
  CHECK_FALSE(dominates(parse_lottery("0,1,0,0,0,0"), vt(3, 6)));
  CHECK_THROWS_AS(dominates(uniform(3), uniform(4)), std::invalid_argument);
}

TEST_CASE("dominance is a partial order preserved by mixing") {
  std::mt19937_64 rng(2);
  int comparable = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::size_t p = 2 + i % 4;
    auto a = testutil::random_lottery(p, rng, 3);
    auto b = testutil::random_lottery(p, rng, 3);
    auto c = testutil::random_lottery(p, rng, 3);
    CHECK(dominates(a, a));
    if (dominates(a, b) && dominates(b, a)) CHECK(a == b);
    if (dominates(a, b) && dominates(b, c)) {
      CHECK(dominates(a, c));
      ++comparable;
    }
    auto d = testutil::random_lottery(p, rng, 3);
    auto e = testutil::random_lottery(p, rng, 3);
    if (dominates(a, b) && dominates(d, e)) {
      Rational w(1 + i % 5, 6);
      CHECK(dominates(mix(w, a, d), mix(w, b, e)));
    }
  }
  CHECK(comparable > 0);
}

TEST_CASE("symmetry and the two-agent vertices") {
  auto v = m2_vertices(6);
  REQUIRE(v.size() == 3);
  CHECK(to_string(v[0]) == "1/2,0,0,0,0,1/2");
  CHECK(to_string(v[1]) == "0,1/2,0,0,1/2,0");
  CHECK(to_string(v[2]) == "0,0,1/2,1/2,0,0");
  auto odd = m2_vertices(5);
  REQUIRE(odd.size() == 3);
  CHECK(to_string(odd[2]) == "0,0,1,0,0");
  CHECK(is_symmetric(uniform(7)));
  CHECK_FALSE(is_symmetric(vt(3, 6)));
}

TEST_CASE("two-agent feasibility inequalities") {
  CHECK(feasible_n2(parse_lottery("1/2,0,0,0,0,1/2")));
  CHECK_FALSE(feasible_n2(parse_lottery("0,0,0,0,0,1")));
  for (std::size_t p = 2; p <= 9; ++p) CHECK(feasible_n2(uniform(p)));
  CHECK(feasible_n2(parse_lottery("1/2,0,0,1/4,0,1/4")));
}

TEST_CASE("lottery text round trip and validation") {
  auto l = parse_lottery("0,1/3,2/6,1/3,0,0");
  CHECK(to_string(l) == "0,1/3,1/3,1/3,0,0");
  CHECK(parse_lottery(to_string(l)) == l);
  CHECK_THROWS_AS(parse_lottery("1/2,1/3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_lottery("3/2,-1/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_lottery("1/2,,1/2"), std::invalid_argument);
}

TEST_CASE("reflection turns sorted negated utilities into sorted utilities") {
  // l . sort(-u) = -reflect(l) . sort(u), with sort ascending. The ascending
  // sort comes from ranking outcomes by u via the profile rearrangement.
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> ud(-10, 10);
  for (int i = 0; i < 300; ++i) {
    const std::size_t p = 2 + i % 6;
    auto l = testutil::random_lottery(p, rng);
    std::vector<Rational> u(p), neg(p);
    for (std::size_t j = 0; j < p; ++j) {
      u[j] = ud(rng);
      neg[j] = -u[j];
    }
    auto order_by = [&](const std::vector<Rational>& vals) {
      std::vector<Outcome> o(p);
      for (std::size_t j = 0; j < p; ++j) o[j] = static_cast<Outcome>(j);
      std::stable_sort(o.begin(), o.end(), [&](Outcome a, Outcome b) { return vals[a] < vals[b]; });
      return make_preference(o);
    };
    auto su = rank_values(u, order_by(u));
    auto sneg = rank_values(neg, order_by(neg));
    REQUIRE(std::is_sorted(su.begin(), su.end()));
    Rational lhs = 0, rhs = 0;
    auto rl = reflect(l);
    for (std::size_t k = 0; k < p; ++k) {
      lhs += l.probs()[k] * sneg[k];
      rhs -= rl.probs()[k] * su[k];
    }
    CHECK(lhs == rhs);
  }
}
