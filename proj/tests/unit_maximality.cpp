#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "wcg/duality.hpp"
#include "wcg/maximality.hpp"

using namespace wcg;

namespace {

RankLottery L(const char* s) { return parse_lottery(s); }

void check_improver(const RankLottery& l, std::size_t n, const ImproveResult& r) {
  REQUIRE(r.verdict == MaxVerdict::Dominated);
  REQUIRE(r.improver.has_value());
  CHECK(dominates(*r.improver, l));
  CHECK(*r.improver != l);
  CHECK(is_feasible(*r.improver, n).verdict == Verdict::Feasible);
}

}  // namespace

TEST_CASE("three agents, six outcomes") {
  CHECK(improve(vt(3, 6), 3).verdict == MaxVerdict::Maximal);
  CHECK(improve(rd(3, 6), 3).verdict == MaxVerdict::Maximal);
  CHECK(improve(uniform(6), 3).verdict == MaxVerdict::Maximal);
  auto mid = L("1/6,1/3,1/6,1/6,0,1/6");
  CHECK(mix(Rational(1, 2), vt(3, 6), rd(3, 6)) == mid);
  check_improver(mid, 3, improve(mid, 3));
  CHECK(dominates(uniform(6), mid));
  check_improver(L("0,1,0,0,0,0"), 3, improve(L("0,1,0,0,0,0"), 3));
  check_improver(L("2/3,0,0,0,0,1/3"), 3, improve(L("2/3,0,0,0,0,1/3"), 3));
  auto bad = is_maximal(L("0,0,1,0,0,0"), 3);
  CHECK(bad.verdict == MaxVerdict::Infeasible);
  CHECK(bad.infeasibility_witness.has_value());
}

TEST_CASE("small named cases") {
  CHECK(is_maximal(L("0,1/2,0,0,1/2,0"), 2).verdict == MaxVerdict::Maximal);
  CHECK(is_maximal(L("1/2,0,0,1/2,0"), 3).verdict == MaxVerdict::Maximal);
  CHECK(is_maximal(L("1/3,0,1/3,1/3,0"), 3).verdict == MaxVerdict::Maximal);
  for (std::size_t p = 1; p <= 5; ++p)
    for (std::size_t n = 2; n <= 4; ++n) CHECK(is_maximal(uniform(p), n).verdict == MaxVerdict::Maximal);
  // A single agent can always be handed the top outcome.
  CHECK(improve(uniform(4), 1).verdict == MaxVerdict::Dominated);
}

TEST_CASE("two agents: maximal iff symmetric") {
  std::mt19937_64 rng(41);
  int sym = 0, asym = 0;
  for (int t = 0; t < 80; ++t) {
    const std::size_t p = 3 + t % 4;
    auto l = testutil::random_lottery(p, rng, 4, 0.3);
    if (t % 2) l = mix(Rational(1, 2), l, reflect(l));
    if (!feasible_n2(l)) continue;
    auto r = improve(l, 2);
    CAPTURE(to_string(l));
    CHECK(r.verdict == (is_symmetric(l) ? MaxVerdict::Maximal : MaxVerdict::Dominated));
    if (r.verdict == MaxVerdict::Dominated) check_improver(l, 2, r);
    (is_symmetric(l) ? sym : asym)++;
  }
  CHECK(sym > 5);
  CHECK(asym > 5);
}

TEST_CASE("duality transports maximality, radius closure") {
  std::mt19937_64 rng(42);
  int decided = 0;
  for (int t = 0; t < 40; ++t) {
    auto l = testutil::random_lottery(5, rng, 3, 0.4);
    auto a = improve(l, 3);
    if (a.verdict == MaxVerdict::Infeasible) continue;
    auto b = improve(dual(l), 3);
    CHECK(a.verdict == b.verdict);
    ++decided;
  }
  CHECK(decided > 5);
  for (const char* s : {"1/2,0,0,1/2,0", "1/3,0,1/3,1/3,0"}) {
    for (Rational a : {Rational(1, 3), Rational(2, 3)}) {
      CHECK(improve(radius_point(L(s), a), 3).verdict == MaxVerdict::Maximal);
    }
  }
}

TEST_CASE("tail-load witnesses") {
  auto right = parse_profile("4 1 2 3 5 6 / 5 2 3 1 6 4 / 6 3 1 2 4 5");
  auto left = parse_profile("4 5 1 2 3 6 / 5 6 2 3 1 4 / 6 4 3 1 2 5");
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(*min_tail_load(vt(3, 6), right, k) == vt(3, 6).cumulative()[k - 1]);
    CHECK(*min_tail_load(rd(3, 6), left, k) == rd(3, 6).cumulative()[k - 1]);
    // With a common order everyone's top outcome is implementable, so a
    // common-preference profile never witnesses anything.
    CHECK(*min_tail_load(uniform(6), identical_profile(3, 6), k) == 0);
  }
  for (std::size_t k = 1; k <= 4; ++k) {
    auto w = tight_profile(uniform(5), 3, k);
    REQUIRE(w.has_value());
    CHECK(*min_tail_load(uniform(5), *w, k) == Rational(k, 5));
  }
  auto blocked = necessary_cuts(L("0,0,1,0,0,0"), 3);
  CHECK_FALSE(min_tail_load(L("0,0,1,0,0,0"), *blocked->witness, 1).has_value());
  // Found witnesses must be tight, whichever profile is returned.
  auto rep = [] {
    MaximalityOptions o;
    o.attach_witnesses = true;
    return is_maximal(vt(3, 6), 3, o);
  }();
  REQUIRE(rep.verdict == MaxVerdict::Maximal);
  CHECK(rep.witnesses.size() == 5);
  for (const auto& [k, pr] : rep.witnesses) CHECK(*min_tail_load(vt(3, 6), pr, k) == vt(3, 6).cumulative()[k - 1]);
  // A dominated guarantee has some rank with no tight profile.
  auto lopsided = L("1/2,0,1/4,1/4");
  REQUIRE(improve(lopsided, 2).verdict == MaxVerdict::Dominated);
  bool missing = false;
  for (std::size_t k = 1; k < 4; ++k) missing |= !tight_profile(lopsided, 2, k).has_value();
  CHECK(missing);
}

TEST_CASE("polar certificates") {
  // Symmetric l with n = 2: an odd z (z_k = -z_{p+1-k}) is orthogonal to it.
  auto l = L("0,1/2,0,0,1/2,0");
  PolarCertificate z{{-5, -2, -1, 1, 2, 5}};
  CHECK(check_polar_certificate(z, l, m2_vertices(6)));
  CHECK(check_polar_certificate(z, l, {uniform(6), L("1/4,1/4,0,0,1/4,1/4")}));
  CHECK_FALSE(check_polar_certificate(PolarCertificate{{-5, -2, -2, 2, 2, 5}}, l, {}));
  CHECK_FALSE(check_polar_certificate(PolarCertificate{{-5, -3, -1, 1, 2, 5}}, l, {}));
  CHECK_FALSE(check_polar_certificate(PolarCertificate{{-5, -2, 1, -1, 2, 5}}, l, {}));
  CHECK_FALSE(check_polar_certificate(z, l, {L("0,0,0,0,0,1")}));
}

TEST_CASE("cuts from certificates are valid and separate") {
  auto mu = L("0,0,1,0,0");
  auto rep = is_feasible(mu, 3);
  REQUIRE(rep.witness_certificate.has_value());
  auto cut = cut_from_certificate(3, 5, *rep.witness_certificate, "test");
  CHECK(cut_lhs(cut, mu) < cut.bound);
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    auto l = testutil::random_lottery(5, rng, 4, 0.3);
    if (implement_at(l, *rep.witness_profile)) CHECK(cut_lhs(cut, l) >= cut.bound);
  }
}
