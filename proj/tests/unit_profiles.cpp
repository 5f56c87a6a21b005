#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "wcg/profiles.hpp"

using namespace wcg;

namespace {

std::vector<std::vector<Outcome>> all_perms(std::size_t p) {
  std::vector<Outcome> cur(p);
  std::iota(cur.begin(), cur.end(), Outcome(0));
  std::vector<std::vector<Outcome>> out;
  do out.push_back(cur);
  while (std::next_permutation(cur.begin(), cur.end()));
  return out;
}

// Oracle: count orbits of all (p!)^n strict profiles by applying every agent
// permutation and every outcome relabeling explicitly and keeping the
// minimum image.
std::size_t brute_orbits(std::size_t n, std::size_t p) {
  auto perms = all_perms(p);
  std::set<std::vector<std::vector<Outcome>>> reps;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<std::vector<Outcome>> prof;
    for (auto i : idx) prof.push_back(perms[i]);
    std::vector<std::vector<Outcome>> best;
    for (const auto& rho : perms) {
      auto img = prof;
      for (auto& o : img)
        for (auto& x : o) x = rho[x];
      std::sort(img.begin(), img.end());  // min over agent orders
      if (best.empty() || img < best) best = img;
    }
    reps.insert(best);
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == perms.size()) idx[pos++] = 0;
    if (pos == n) break;
  }
  return reps.size();
}

Profile random_profile(std::size_t n, std::size_t p, std::mt19937_64& rng) {
  Profile pr;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Outcome> o(p);
    std::iota(o.begin(), o.end(), Outcome(0));
    std::shuffle(o.begin(), o.end(), rng);
    pr.prefs.push_back(make_preference(o));
  }
  return pr;
}

}  // namespace

TEST_CASE("k tails") {
  auto id = make_preference({0, 1, 2, 3});
  CHECK(k_tail_list(id, 2) == std::vector<Outcome>{0, 1});
  CHECK(k_tail(id, 4) == 0xFu);
  auto q = make_preference({2, 0, 1});
  CHECK(k_tail_list(q, 1) == std::vector<Outcome>{2});
  CHECK_THROWS_AS(k_tail(q, 0), std::invalid_argument);
  CHECK_THROWS_AS(k_tail(q, 4), std::invalid_argument);
}

TEST_CASE("rank rearrangement") {
  auto pref = make_preference({1, 2, 0});  // "2 3 1" worst to best
  OutcomeLottery l{{Rational(1, 2), Rational(1, 3), Rational(1, 6)}};
  CHECK(to_string(rank_rearrange(l, pref)) == "1/3,1/6,1/2");
  OutcomeLottery uni{{Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}};
  CHECK(rank_rearrange(uni, make_preference({3, 1, 0, 2})) == uniform(4));
  OutcomeLottery top{{0, 0, 1}};
  CHECK(to_string(rank_rearrange(top, pref)) == "0,1,0");
  CHECK(to_string(rank_rearrange(top, make_preference({0, 1, 2}))) == "0,0,1");
}

TEST_CASE("canonical form is an orbit invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 4, p = 2 + trial % 5;
    auto pr = random_profile(n, p, rng);
    auto c = canonicalize(pr);
    CHECK(canonicalize(c) == c);
    auto swapped = pr;
    std::shuffle(swapped.prefs.begin(), swapped.prefs.end(), rng);
    CHECK(canonicalize(swapped) == c);
    std::vector<Outcome> rho(p);
    std::iota(rho.begin(), rho.end(), Outcome(0));
    std::shuffle(rho.begin(), rho.end(), rng);
    auto relabeled = pr;
    for (auto& pref : relabeled.prefs)
      for (auto& x : pref.order) x = rho[x];
    CHECK(canonicalize(relabeled) == c);
    // The returned map carries pr onto its canonical form.
    auto img = canonicalize_with_map(pr);
    auto mapped = pr;
    for (auto& pref : mapped.prefs)
      for (auto& x : pref.order) x = img.relabel[x];
    std::sort(mapped.prefs.begin(), mapped.prefs.end());
    CHECK(mapped.prefs == img.profile.prefs);
  }
}

TEST_CASE("an already canonical profile is a fixed point") {
  auto pr = parse_profile("1 2 3 / 1 3 2");
  CHECK(canonicalize(pr) == pr);
}

TEST_CASE("enumeration counts") {
  CHECK(count_canonical_profiles(1, 5) == 1);
  CHECK(count_canonical_profiles(2, 2) == 2);
  // Every enumerated tuple is its own canonical form.
  for (const auto& pr : enumerate_profiles(3, 4)) CHECK(canonicalize(pr) == pr);
  // Cardinality equals the brute-force orbit count whenever (p!)^n <= 1e5.
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t p = 2; p <= 6; ++p) {
      double space = 1;
      for (std::size_t i = 0; i < n; ++i) space *= std::tgamma(double(p) + 1);
      if (space > 1e5) continue;
      CAPTURE(n);
      CAPTURE(p);
      CHECK(count_canonical_profiles(n, p) == brute_orbits(n, p));
    }
  }
}

TEST_CASE("chunks partition the stream") {
  ProfileSpace space(3, 4);
  std::uint64_t total = 0;
  for (std::size_t c = 0; c < space.chunk_count(); ++c) {
    space.for_each_in_chunk(c, [&](const std::uint32_t* t) {
      CHECK(t[1] == c);
      ++total;
      return true;
    });
  }
  CHECK(total == count_canonical_profiles(3, 4));
}

TEST_CASE("padded profiles reproduce the three-agent six-outcome examples") {
  auto inner = cyclic_profile(3, 3);  // x y z / y z x / z x y
  // outcomes: x=1 y=2 z=3, a=4 b=5 c=6
  CHECK(to_string(cyclic_pad_profile(inner)) == "4 1 2 3 5 6 / 5 2 3 1 6 4 / 6 3 1 2 4 5");
  CHECK(to_string(rd_pad_profile(inner)) == "4 5 1 2 3 6 / 5 6 2 3 1 4 / 6 4 3 1 2 5");
  auto seven = cyclic_pad_profile(cyclic_profile(3, 4));
  CHECK(seven.p() == 7);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(seven.prefs[i].order.front() == 4 + i);
    CHECK(std::vector<Outcome>(seven.prefs[i].order.begin() + 1, seven.prefs[i].order.begin() + 5) ==
          cyclic_profile(3, 4).prefs[i].order);
  }
  CHECK(cyclic_pad_profile(cyclic_pad_profile(inner)).p() == 9);
}

TEST_CASE("profile text format") {
  auto pr = parse_profile("1 2 3 / 2 3 1 / 3 1 2");
  CHECK(pr.n() == 3);
  CHECK(to_string(pr) == "1 2 3 / 2 3 1 / 3 1 2");
  CHECK_THROWS_AS(parse_profile("1 2 2 / 1 2 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile("1 2 / 1 2 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_profile("1 2 x"), std::invalid_argument);
}
