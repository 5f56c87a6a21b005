#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "wcg/compose.hpp"
#include "wcg/duality.hpp"

using namespace wcg;

namespace {

RankLottery L(const char* s) { return parse_lottery(s); }

// Random lottery with at least one zero entry.
RankLottery random_boundary(std::size_t p, std::mt19937_64& rng) {
  for (;;) {
    auto l = testutil::random_lottery(p, rng, 6, 0.3);
    if (sgn(l.min_entry()) == 0) return l;
  }
}

}  // namespace

TEST_CASE("word syntax") {
  CHECK(parse_word("RD,VT,VT") == Word{Op::RD, Op::VT, Op::VT});
  CHECK(parse_word(" rd , vt") == Word{Op::RD, Op::VT});
  CHECK(to_string(parse_word("VT,RD")) == "VT,RD");
  CHECK_THROWS_AS(parse_word("RD,XX"), std::invalid_argument);
  CHECK_THROWS_AS(parse_word(""), std::invalid_argument);
  CHECK(swap_letters(parse_word("RD,VT")) == parse_word("VT,RD"));
}

TEST_CASE("single compositions") {
  CHECK(vt_compose(rd(3, 4), 3) == L("0,1/3,1/3,0,1/3,0,0"));
  CHECK(vt_compose(uniform(4), 3) == vt(3, 7));
  CHECK(rd_compose(vt(3, 4), 3) == L("1/4,1/4,0,1/4,0,0,1/4"));
  CHECK(rd_compose(uniform(4), 3) == rd(3, 7));
  CHECK(vt_compose(L("1/2,1/2"), 4).p() == 6);
  CHECK_THROWS_AS(rd_compose_direct(uniform(3), 3), std::invalid_argument);
}

TEST_CASE("the two RD forms agree on boundary lotteries") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    auto l = random_boundary(2 + i % 7, rng);
    const std::size_t n = 2 + i % 4;
    CHECK(rd_compose_direct(l, n) == rd_compose_via_dual(l, n));
  }
}

TEST_CASE("duality commutes with composition") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    auto l = testutil::random_lottery(1 + i % 7, rng, 6, 0.2);
    const std::size_t n = 2 + i % 4;
    CHECK(dual(vt_compose(l, n)) == rd_compose(dual(l), n));
    CHECK(dual(rd_compose(l, n)) == vt_compose(dual(l), n));
  }
}

TEST_CASE("VT composition commutes with mixing, RD composition does not") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 100; ++i) {
    auto a = testutil::random_lottery(4, rng), b = testutil::random_lottery(4, rng);
    Rational w(1 + i % 4, 5);
    CHECK(vt_compose(mix(w, a, b), 3) == mix(w, vt_compose(a, 3), vt_compose(b, 3)));
  }
  // Regression: RD(3,4) and VT(3,4) mixed half/half, then composed.
  auto a = rd(3, 4), b = vt(3, 4);
  auto lhs = rd_compose(mix(Rational(1, 2), a, b), 3);
  auto rhs = mix(Rational(1, 2), rd_compose(a, 3), rd_compose(b, 3));
  CHECK(lhs != rhs);
  CHECK(to_string(rhs) == "5/24,5/24,1/12,5/24,0,1/12,5/24");
}

TEST_CASE("canonical guarantees") {
  CHECK(canonical(parse_word("RD,VT,VT"), 3, 11) == L("1/5,1/5,0,0,1/5,1/5,0,0,0,0,1/5"));
  CHECK(canonical(parse_word("RD,VT,RD"), 3, 11) == L("1/6,1/6,0,1/6,1/6,0,0,1/6,0,0,1/6"));
  // The (3,7) table.
  CHECK(canonical(parse_word("VT"), 3, 7) == L("0,1/4,1/4,1/4,1/4,0,0"));
  CHECK(canonical(parse_word("VT,VT"), 3, 7) == L("0,0,1,0,0,0,0"));
  CHECK(canonical(parse_word("RD"), 3, 7) == L("1/3,1/3,0,0,0,0,1/3"));
  CHECK(canonical(parse_word("RD,RD"), 3, 7) == L("1/6,1/6,1/6,1/6,0,1/6,1/6"));
  CHECK(canonical(parse_word("VT,RD"), 3, 7) == L("0,1/3,1/3,0,1/3,0,0"));
  CHECK(canonical(parse_word("RD,VT"), 3, 7) == L("1/4,1/4,0,1/4,0,0,1/4"));
  // Constant words.
  for (std::size_t n = 3; n <= 5; ++n)
    for (std::size_t p = n + 1; p <= 4 * n + 2; ++p) {
      const auto ctx = canonical_context(n, p);
      for (std::size_t h = 1; h <= ctx.d; ++h) {
        std::vector<Rational> v(p, Rational(0)), r(p, Rational(0));
        for (std::size_t k = h; k < p - (n - 1) * h; ++k) v[k] = Rational(1, p - n * h);
        for (std::size_t k = 0; k < (n - 1) * h; ++k) r[k] = Rational(1, n * h);
        for (std::size_t k = p - h; k < p; ++k) r[k] = Rational(1, n * h);
        CHECK(canonical(Word(h, Op::VT), n, p) == RankLottery(v));
        CHECK(canonical(Word(h, Op::RD), n, p) == RankLottery(r));
      }
    }
  CHECK_THROWS_AS(canonical(parse_word("VT,VT"), 3, 6), std::invalid_argument);
}

TEST_CASE("enumeration of canonical guarantees") {
  auto six = enumerate_canonical(3, 6);
  REQUIRE(six.size() == 2);
  CHECK(six[0].second == vt(3, 6));
  CHECK(six[1].second == rd(3, 6));
  CHECK(enumerate_canonical(3, 7).size() == 6);
  CHECK(enumerate_canonical(3, 11).size() == 14);
  CHECK(enumerate_canonical(4, 13).size() == 14);
  for (std::size_t n = 3; n <= 5; ++n)
    for (std::size_t p = n + 1; p <= 16; ++p) {
      const auto all = enumerate_canonical(n, p);
      const auto d = canonical_context(n, p).d;
      CHECK(all.size() == (std::size_t(1) << (d + 1)) - 2);
      for (const auto& [w, l] : all) {
        CHECK(uniform_on_support(l));
        CHECK(canonical(swap_letters(w), n, p) == dual(l));
      }
    }
}

TEST_CASE("simplices") {
  auto s = prefix_simplex(parse_word("VT,RD"), 3, 7);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == uniform(7));
  CHECK(s[1] == L("0,1/4,1/4,1/4,1/4,0,0"));
  CHECK(s[2] == L("0,1/3,1/3,0,1/3,0,0"));
  auto t = prefix_simplex(parse_word("RD,VT"), 3, 7);
  CHECK(t[1] == L("1/3,1/3,0,0,0,0,1/3"));
  CHECK(t[2] == L("1/4,1/4,0,1/4,0,0,1/4"));
  CHECK(prefix_simplex(parse_word("RD"), 3, 6) == std::vector<RankLottery>{uniform(6), rd(3, 6)});
  CHECK_FALSE(affinely_independent({uniform(3), vt(2, 3), vt(2, 3)}));
  CHECK_THROWS_AS(prefix_simplex(parse_word("RD"), 3, 7), std::invalid_argument);
  for (std::size_t p = 7; p <= 16; ++p) {
    const auto d = canonical_context(3, p).d;
    for (std::size_t bits = 0; bits < (std::size_t(1) << d); ++bits) {
      Word w;
      for (std::size_t j = 0; j < d; ++j) w.push_back(bits >> j & 1 ? Op::RD : Op::VT);
      CHECK(prefix_simplex(w, 3, p).size() == d + 1);
    }
  }
}

TEST_CASE("support tables") {
  auto t = support_table(parse_word("RD,VT"), 3, 7);
  REQUIRE(t.blocks.size() == 3);
  CHECK(t.blocks[0] == std::vector<std::size_t>{1, 2, 7});
  CHECK(t.blocks[1] == std::vector<std::size_t>{3, 5, 6});
  CHECK(t.blocks[2] == std::vector<std::size_t>{4});
  CHECK(t.supports[1] == std::vector<std::size_t>{1, 2, 4, 7});
  CHECK(t.theta[1] + 3 == 4);

  // All-RD words: supports nest, and the last block stays empty.
  auto r = support_table(parse_word("RD,RD,RD"), 3, 11);
  for (std::size_t k = 1; k < r.supports.size(); ++k) {
    CHECK(std::includes(r.supports[k].begin(), r.supports[k].end(), r.supports[k - 1].begin(),
                        r.supports[k - 1].end()));
  }
  for (std::size_t rank : r.blocks.back()) {
    for (const auto& s : r.supports) CHECK(std::find(s.begin(), s.end(), rank) == s.end());
  }

  // Every RD-headed word at several sizes, including short words.
  int tables = 0;
  for (std::size_t n = 3; n <= 5; ++n)
    for (std::size_t p = n + 1; p <= 22; ++p) {
      const auto d = canonical_context(n, p).d;
      for (std::size_t h = 1; h <= d; ++h)
        for (std::size_t bits = 0; bits < (std::size_t(1) << (h - 1)); ++bits) {
          Word w{Op::RD};
          for (std::size_t j = 0; j + 1 < h; ++j) w.push_back(bits >> j & 1 ? Op::RD : Op::VT);
          auto tab = support_table(w, n, p);
          std::vector<std::size_t> all;
          for (const auto& b : tab.blocks) all.insert(all.end(), b.begin(), b.end());
          std::sort(all.begin(), all.end());
          CHECK(all.size() == p);
          CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
          CHECK(tab.blocks.back().size() == canonical_context(n, p).q);
          ++tables;
        }
    }
  CHECK(tables > 100);
  CHECK_THROWS_AS(support_table(parse_word("VT,RD"), 3, 7), std::invalid_argument);
}
