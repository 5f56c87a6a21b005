#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "wcg/feasibility.hpp"

using namespace wcg;

namespace {

// Oracle: walk every (p!)^n profile (no symmetry reduction) and solve the
// implementation LP directly with the generic solver.
bool brute_feasible(const RankLottery& l, std::size_t n) {
  const std::size_t p = l.p();
  std::vector<std::vector<Outcome>> perms;
  std::vector<Outcome> cur(p);
  std::iota(cur.begin(), cur.end(), Outcome(0));
  do perms.push_back(cur);
  while (std::next_permutation(cur.begin(), cur.end()));
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    Profile pr;
    for (auto i : idx) pr.prefs.push_back(Preference{perms[i]});
    if (solve(implementation_lp(l, pr)).status != LPStatus::Optimal) return false;
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == perms.size()) idx[pos++] = 0;
    if (pos == n) return true;
  }
}

OutcomeLottery checked_implementation(const RankLottery& l, const Profile& pr) {
  auto got = implement_at(l, pr);
  REQUIRE(got.has_value());
  Rational total = 0;
  for (const auto& m : got->mass) {
    CHECK(sgn(m) >= 0);
    total += m;
  }
  CHECK(total == 1);
  for (const auto& pref : pr.prefs) CHECK(dominates(rank_rearrange(*got, pref), l));
  return *got;
}

}  // namespace

TEST_CASE("implementation at the three-agent six-outcome profiles") {
  // outcomes x=1 y=2 z=3 a=4 b=5 c=6
  auto left = parse_profile("4 5 1 2 3 6 / 5 6 2 3 1 4 / 6 4 3 1 2 5");
  auto right = parse_profile("4 1 2 3 5 6 / 5 2 3 1 6 4 / 6 3 1 2 4 5");
  auto at_left = checked_implementation(rd(3, 6), left);
  for (int o = 0; o < 3; ++o) CHECK(at_left.mass[o] == 0);
  for (int o = 3; o < 6; ++o) CHECK(at_left.mass[o] == Rational(1, 3));
  auto at_right = checked_implementation(vt(3, 6), right);
  for (int o = 0; o < 3; ++o) CHECK(at_right.mass[o] == Rational(1, 3));
  for (int o = 3; o < 6; ++o) CHECK(at_right.mass[o] == 0);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t p = 2 + t % 6, n = 1 + t % 4;
    Profile pr;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Outcome> o(p);
      std::iota(o.begin(), o.end(), Outcome(0));
      std::shuffle(o.begin(), o.end(), rng);
      pr.prefs.push_back(make_preference(o));
    }
    auto got = checked_implementation(uniform(p), pr);
    (void)got;
  }
  Profile bad{{Preference{{0, 0, 1}}}};
  CHECK_THROWS_AS(implement_at(uniform(3), bad), std::invalid_argument);
}

TEST_CASE("decisions on named lotteries") {
  auto rep = is_feasible(vt(3, 6), 3);
  CHECK(rep.verdict == Verdict::Feasible);
  CHECK(is_feasible(rd(3, 6), 3).verdict == Verdict::Feasible);

  auto bad = is_feasible(parse_lottery("0,0,1,0,0"), 3);
  REQUIRE(bad.verdict == Verdict::Infeasible);
  REQUIRE(bad.witness_profile.has_value());
  CHECK(verify_infeasibility(parse_lottery("0,0,1,0,0"), bad));
  CHECK_FALSE(brute_feasible(parse_lottery("0,0,1,0,0"), 3));

  for (std::size_t p = 2; p <= 6; ++p)
    for (std::size_t n = 1; n <= (p < 6 ? 4u : 3u); ++n)
      CHECK(is_feasible(uniform(p), n).verdict == Verdict::Feasible);
}

TEST_CASE("verdicts match the brute-force oracle") {
  std::mt19937_64 rng(12);
  struct Shape {
    std::size_t n, p;
  };
  const Shape shapes[] = {{2, 3}, {3, 3}, {2, 4}, {3, 4}, {4, 3}, {1, 4}};
  int infeasible = 0, feasible = 0;
  for (int t = 0; t < 120; ++t) {
    const auto s = shapes[t % 6];
    if (s.n == 3 && s.p == 4 && t % 4) continue;  // 13824 LPs per oracle call
    auto l = testutil::random_lottery(s.p, rng, 4, 0.4);
    const bool truth = brute_feasible(l, s.n);
    for (int mode = 0; mode < 3; ++mode) {
      FeasibilityOptions opt;
      opt.use_cuts = mode != 1;
      opt.use_library = mode != 2;
      auto rep = is_feasible(l, s.n, opt);
      CAPTURE(to_string(l));
      CAPTURE(s.n);
      CHECK(rep.verdict == (truth ? Verdict::Feasible : Verdict::Infeasible));
      if (!truth) CHECK(verify_infeasibility(l, rep));
    }
    (truth ? feasible : infeasible)++;
  }
  CHECK(feasible > 5);
  CHECK(infeasible > 5);
}

TEST_CASE("feasibility is monotone under dominance") {
  std::mt19937_64 rng(13);
  int pairs = 0;
  for (int t = 0; t < 400 && pairs < 40; ++t) {
    const std::size_t p = 4 + t % 3, n = 2 + t % 2;
    auto mu = testutil::random_lottery(p, rng, 4, 0.3);
    auto la = testutil::random_lottery(p, rng, 4, 0.3);
    if (!dominates(mu, la)) continue;
    ++pairs;
    if (is_feasible(mu, n).verdict == Verdict::Feasible) {
      CHECK(is_feasible(la, n).verdict == Verdict::Feasible);
    }
  }
  CHECK(pairs > 10);
}

TEST_CASE("witnesses are deterministic across worker counts") {
  auto l = parse_lottery("0,1/4,1/2,1/4,0");
  FeasibilityOptions a, b;
  a.use_cuts = b.use_cuts = false;
  a.use_library = b.use_library = false;
  b.limits.jobs = 3;
  auto ra = is_feasible(l, 3, a), rb = is_feasible(l, 3, b);
  REQUIRE(ra.verdict == Verdict::Infeasible);
  REQUIRE(rb.verdict == Verdict::Infeasible);
  CHECK(*ra.witness_profile == *rb.witness_profile);
}

TEST_CASE("limits give undecided, never a guess") {
  FeasibilityOptions opt;
  opt.use_library = false;
  opt.limits.max_profiles = 300;
  auto rep = is_feasible(vt(3, 6), 3, opt);
  CHECK(rep.verdict == Verdict::Undecided);
  CHECK_FALSE(rep.limit_reason.empty());
  auto big = is_feasible(uniform(10), 3);
  CHECK(big.verdict == Verdict::Undecided);
}

TEST_CASE("balanced families") {
  auto six = balanced_family(6, 2, 3);
  REQUIRE(six.has_value());
  CHECK(six->sets == std::vector<std::vector<std::size_t>>{{1, 2}, {3, 4}, {5, 6}});
  CHECK(six->weights == std::vector<Rational>(3, Rational(1)));

  auto five = balanced_family(5, 2, 4);
  REQUIRE(five.has_value());
  CHECK(five->sets == std::vector<std::vector<std::size_t>>{{1, 2}, {3, 4}, {3, 5}, {4, 5}});
  CHECK(five->weights ==
        std::vector<Rational>{Rational(1), Rational(1, 2), Rational(1, 2), Rational(1, 2)});

  auto twelve = balanced_family(12, 5, 6);
  REQUIRE(twelve.has_value());
  CHECK(twelve->sets.size() == 6);
  CHECK(is_balanced(*twelve));

  CHECK_FALSE(balanced_family(8, 3, 4).has_value());  // p = 2n with n = 4
  CHECK_FALSE(balanced_family(5, 2, 3).has_value());  // p = 2n - 1
  CHECK_FALSE(balanced_family(6, 4, 6).has_value());  // k > p/2

  // Every produced family is balanced and small enough, across the whole range.
  int built = 0;
  for (std::size_t n = 2; n <= 14; ++n) {
    for (std::size_t p = 4; p <= 2 * n; ++p) {
      for (std::size_t k = 2; k <= p / 2; ++k) {
        auto f = balanced_family(p, k, n);
        CHECK(f.has_value() == k_over_p_cuts_apply(n, p));
        if (!f) continue;
        ++built;
        CHECK(is_balanced(*f));
        CHECK(f->sets.size() <= n);
      }
    }
  }
  CHECK(built > 100);
  BalancedFamily broken{4, 2, {{1, 2}, {2, 3}}, {1, 1}};
  CHECK_FALSE(is_balanced(broken));
}

TEST_CASE("balanced-family profiles block lotteries below k/p") {
  for (std::size_t n = 3; n <= 5; ++n) {
    for (std::size_t p = 4; p <= std::min<std::size_t>(2 * n, 8); ++p) {
      for (std::size_t k = 2; k <= p / 2; ++k) {
        auto f = balanced_family(p, k, n);
        if (!f) continue;
        // All mass on rank k+1 puts [l]_1^k = 0 < k/p.
        std::vector<Rational> v(p, Rational(0));
        v[k] = 1;
        RankLottery l(v);
        CHECK_FALSE(implement_at(l, balanced_family_profile(*f, n)).has_value());
      }
    }
  }
}

TEST_CASE("necessary cuts") {
  CHECK_FALSE(necessary_cuts(vt(3, 6), 3).has_value());
  CHECK_FALSE(necessary_cuts(rd(3, 6), 3).has_value());
  auto v = necessary_cuts(parse_lottery("0,0,1,0,0,0"), 3);
  REQUIRE(v.has_value());
  REQUIRE(v->witness.has_value());
  CHECK_FALSE(implement_at(parse_lottery("0,0,1,0,0,0"), *v->witness).has_value());
  // Two agents: asymmetric but satisfying the reflection inequalities.
  auto asym = parse_lottery("1/2,0,0,1/4,0,1/4");
  CHECK_FALSE(is_symmetric(asym));
  CHECK_FALSE(necessary_cuts(asym, 2).has_value());
  auto top = necessary_cuts(parse_lottery("0,0,0,1"), 2);
  REQUIRE(top.has_value());
  CHECK_FALSE(implement_at(parse_lottery("0,0,0,1"), *top->witness).has_value());
  // Every cut is sound: a violating lottery is never feasible by enumeration.
  std::mt19937_64 rng(14);
  for (int t = 0; t < 150; ++t) {
    const std::size_t p = 3 + t % 3, n = 2 + t % 3;
    auto l = testutil::random_lottery(p, rng, 4, 0.4);
    if (!necessary_cuts(l, n)) continue;
    FeasibilityOptions opt;
    opt.use_cuts = false;
    CHECK(is_feasible(l, n, opt).verdict == Verdict::Infeasible);
  }
}

TEST_CASE("cardinal falsifier") {
  for (std::size_t p = 2; p <= 7; ++p) CHECK_FALSE(cardinal_falsifier(uniform(p), 3, 500, p).has_value());
  auto hit = cardinal_falsifier(parse_lottery("0,0,0,1"), 2, 200, 1);
  REQUIRE(hit.has_value());
  CHECK(sgn(hit->value) > 0);
  CHECK(cardinal_value(parse_lottery("0,0,0,1"), hit->utilities) == hit->value);
  for (std::size_t a = 0; a < 4; ++a) CHECK(hit->utilities[0][a] + hit->utilities[1][a] == 0);
  // (u, -u) with distinct entries: both top ranks are positive.
  std::vector<std::vector<Rational>> pair{{-3, -1, 1, 3}, {3, 1, -1, -3}};
  CHECK(cardinal_value(parse_lottery("0,0,0,1"), pair) == 6);

  // Never contradicts a feasible verdict.
  std::mt19937_64 rng(15);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t p = 3 + t % 3, n = 2 + t % 2;
    auto l = testutil::random_lottery(p, rng, 4, 0.3);
    if (is_feasible(l, n).verdict != Verdict::Feasible) continue;
    ++checked;
    CHECK_FALSE(cardinal_falsifier(l, n, 2000, t).has_value());
  }
  CHECK(checked > 5);
}

TEST_CASE("probe agrees with the exact LP") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 40; ++t) {
    const std::size_t p = 4 + t % 3, n = 2 + t % 3;
    auto l = testutil::random_lottery(p, rng, 5, 0.3);
    detail::FeasibilityProbe probe(l, n);
    for (int s = 0; s < 60; ++s) {
      Profile pr;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Outcome> o(p);
        std::iota(o.begin(), o.end(), Outcome(0));
        std::shuffle(o.begin(), o.end(), rng);
        pr.prefs.push_back(make_preference(o));
      }
      CHECK(probe.feasible(pr) == implement_at(l, pr).has_value());
    }
  }
}

TEST_CASE("hard profile library") {
  auto lib = hard_profiles(3, 6);
  CHECK(lib.size() > 10);
  auto has = [&](const Profile& pr) {
    return std::find(lib.begin(), lib.end(), canonicalize(pr)) != lib.end();
  };
  CHECK(has(parse_profile("4 5 1 2 3 6 / 5 6 2 3 1 4 / 6 4 3 1 2 5")));
  CHECK(has(parse_profile("4 1 2 3 5 6 / 5 2 3 1 6 4 / 6 3 1 2 4 5")));
  for (const auto& pr : lib) CHECK(canonicalize(pr) == pr);
}

TEST_CASE("full scan timing at three agents, seven outcomes" * doctest::skip(std::getenv("WCG_SLOW") == nullptr)) {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = is_feasible(vt(3, 7), 3);
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "vt(3,7): " << to_string(rep.verdict) << " in " << ms << " ms, "
            << rep.profiles_checked << " profiles\n";
  CHECK(rep.verdict == Verdict::Feasible);
}
