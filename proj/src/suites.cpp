#include "wcg/suites.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>

#include "wcg/compose.hpp"
#include "wcg/duality.hpp"
#include "wcg/maximality.hpp"
#include "wcg/protocols.hpp"

namespace wcg {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Undecided: return "undecided";
  }
  return "?";
}

CheckStatus SuiteResult::status() const {
  bool undecided = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return CheckStatus::Fail;
    undecided |= c.status == CheckStatus::Undecided;
  }
  return undecided ? CheckStatus::Undecided : CheckStatus::Pass;
}

namespace {

using Rng = std::mt19937_64;

struct Ctx {
  const SuiteOptions& opt;
  SuiteResult& out;
  Rng rng;

  void check(std::string claim, std::string expected, std::string computed) {
    CheckStatus st = expected == computed ? CheckStatus::Pass : CheckStatus::Fail;
    out.checks.push_back({std::move(claim), std::move(expected), std::move(computed), st});
  }
  void check_bool(std::string claim, bool ok) { check(std::move(claim), "true", ok ? "true" : "false"); }
  // Maximality verdicts: Undecided stays Undecided instead of failing.
  void check_verdict(std::string claim, MaxVerdict expected, MaxVerdict got, std::string extra = {}) {
    CheckStatus st = got == expected ? CheckStatus::Pass
                     : got == MaxVerdict::Undecided ? CheckStatus::Undecided
                                                    : CheckStatus::Fail;
    std::string computed = to_string(got);
    if (!extra.empty()) computed += " (" + extra + ")";
    out.checks.push_back({std::move(claim), to_string(expected), computed, st});
  }

  FeasibilityOptions feas() const { return FeasibilityOptions{opt.limits, true, true}; }
  MaximalityOptions maxo() const {
    MaximalityOptions m;
    m.limits = opt.limits;
    return m;
  }

  void maximal(const std::string& name, const RankLottery& l, std::size_t n, bool expect_max) {
    auto r = is_maximal(l, n, maxo());
    std::string extra = r.improver ? "improver " + to_string(*r.improver) : r.limit_reason;
    check_verdict(name + " " + to_string(l) + (expect_max ? " is maximal" : " is dominated") + " at n=" +
                      std::to_string(n),
                  expect_max ? MaxVerdict::Maximal : MaxVerdict::Dominated, r.verdict, extra);
    if (!expect_max && r.improver) {
      check_bool("the improver of " + to_string(l) + " is feasible and dominates it",
                 dominates(*r.improver, l) && *r.improver != l &&
                     is_feasible(*r.improver, n, feas()).verdict == Verdict::Feasible);
    }
  }

  RankLottery random_lottery(std::size_t p, int spread = 6) {
    std::uniform_int_distribution<int> d(0, spread);
    std::vector<Rational> v(p);
    int total = 0;
    for (auto& x : v) {
      const int a = d(rng);
      x = a;
      total += a;
    }
    if (total == 0) {
      v[0] = 1;
      total = 1;
    }
    for (auto& x : v) x /= total;
    return RankLottery(std::move(v));
  }

  Rational random_weight(int den = 12) {
    std::uniform_int_distribution<int> d(1, den - 1);
    Rational w(d(rng), den);
    w.canonicalize();
    return w;
  }

  // Moves a random share of one rank's mass to a lower rank: the result is
  // dominated by l, so it stays feasible whenever l is.
  RankLottery push_down(const RankLottery& l) {
    auto v = l.probs();
    const std::size_t p = v.size();
    std::uniform_int_distribution<std::size_t> pick(1, p - 1);
    for (int tries = 0; tries < 100; ++tries) {
      const std::size_t from = pick(rng);
      if (sgn(v[from]) == 0) continue;
      std::uniform_int_distribution<std::size_t> to(0, from - 1);
      Rational amt = v[from] * random_weight();
      v[from] -= amt;
      v[to(rng)] += amt;
      for (auto& x : v) x.canonicalize();
      return RankLottery(std::move(v));
    }
    return l;
  }
};

RankLottery L(const char* s) { return parse_lottery(s); }

void intro_p6(Ctx& c) {
  for (auto [name, l] : {std::pair<const char*, RankLottery>{"UNI(6)", uniform(6)},
                         {"VT(3,6)", vt(3, 6)},
                         {"RD(3,6)", rd(3, 6)}}) {
    auto f = is_feasible(l, 3, c.feas());
    c.check(std::string(name) + " is feasible at n=3", "feasible", to_string(f.verdict));
    c.maximal(name, l, 3, true);
  }
  for (const char* s : {"0,1,0,0,0,0", "2/3,0,0,0,0,1/3"}) {
    c.check(std::string(s) + " is feasible at n=3", "feasible", to_string(is_feasible(L(s), 3, c.feas()).verdict));
    c.maximal("guarantee", L(s), 3, false);
  }
  auto low = L("1/6,1/3,1/6,1/6,0,1/6");
  c.check_bool("UNI(6) dominates 1/6,1/3,1/6,1/6,0,1/6", dominates(uniform(6), low) && uniform(6) != low);
  c.maximal("guarantee", low, 3, false);
}

void two_agents(Ctx& c, std::size_t p) {
  auto verts = m2_vertices(p);
  for (const auto& v : verts) c.maximal("symmetric vertex", v, 2, true);
  for (int i = 0; i < 20; ++i) {
    std::vector<Rational> w(verts.size());
    Rational total = 0;
    for (auto& x : w) {
      x = c.random_weight();
      total += x;
    }
    for (auto& x : w) x /= total;
    auto l = convex_combination(w, verts);
    c.check_bool("random mix " + to_string(l) + " is symmetric and feasible", is_symmetric(l) && feasible_n2(l));
    c.maximal("symmetric mix", l, 2, true);
  }
  for (int i = 0; i < 20; ++i) {
    RankLottery l = uniform(p);
    do {
      std::vector<Rational> w(verts.size());
      Rational total = 0;
      for (auto& x : w) {
        x = c.random_weight();
        total += x;
      }
      for (auto& x : w) x /= total;
      l = c.push_down(convex_combination(w, verts));
    } while (is_symmetric(l));
    c.check_bool(to_string(l) + " is asymmetric and feasible", feasible_n2(l));
    c.maximal("asymmetric guarantee", l, 2, false);
  }
}

void three_outcomes(Ctx& c) {
  for (std::size_t n : {3u, 4u}) {
    auto r = improve(uniform(3), n, c.maxo());
    c.check_verdict("no guarantee improves on UNI(3) at n=" + std::to_string(n), MaxVerdict::Maximal, r.verdict,
                    r.improver ? to_string(*r.improver) : r.limit_reason);
    int feasible = 0;
    for (int i = 0; i < 20; ++i) {
      auto l = i % 2 ? c.random_lottery(3) : c.push_down(uniform(3));
      auto f = is_feasible(l, n, c.feas());
      if (f.verdict == Verdict::Undecided) {
        c.out.checks.push_back({"feasibility of " + to_string(l) + " is decided", "decided", f.limit_reason,
                                CheckStatus::Undecided});
        continue;
      }
      if (f.verdict == Verdict::Feasible) {
        ++feasible;
        c.check_bool("feasible " + to_string(l) + " is dominated by UNI(3) at n=" + std::to_string(n),
                     dominates(uniform(3), l));
      }
    }
    c.check_bool("some sampled lotteries are feasible at n=" + std::to_string(n), feasible > 0);
  }
}

void duality(Ctx& c) {
  bool all = true;
  for (std::size_t p = 4; p <= 10; ++p)
    for (std::size_t n = 3; n < p; ++n) all &= dual(vt(n, p)) == rd(n, p);
  c.check_bool("dual(VT(n,p)) = RD(n,p) for 3 <= n < p <= 10", all);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    auto l = c.random_lottery(1 + i % 9);
    if (dual(dual(l)) != l) ++bad;
  }
  c.check("dual is an involution on 1000 random lotteries", "0 failures", std::to_string(bad) + " failures");
  c.check("dual of 1/2,0,0,1/2,0", "1/3,0,1/3,1/3,0", to_string(dual(L("1/2,0,0,1/2,0"))));
  c.check("dual of VT(3,6)", "1/3,1/3,0,0,0,1/3", to_string(dual(vt(3, 6))));
}

void composition(Ctx& c) {
  const std::vector<std::tuple<const char*, std::size_t, std::size_t, const char*>> table{
      {"VT", 3, 7, "0,1/4,1/4,1/4,1/4,0,0"},
      {"RD", 3, 7, "1/3,1/3,0,0,0,0,1/3"},
      {"VT,VT", 3, 7, "0,0,1,0,0,0,0"},
      {"VT,RD", 3, 7, "0,1/3,1/3,0,1/3,0,0"},
      {"RD,VT", 3, 7, "1/4,1/4,0,1/4,0,0,1/4"},
      {"RD,RD", 3, 7, "1/6,1/6,1/6,1/6,0,1/6,1/6"},
      {"RD,VT,VT", 3, 11, "1/5,1/5,0,0,1/5,1/5,0,0,0,0,1/5"},
      {"RD,VT,RD", 3, 11, "1/6,1/6,0,1/6,1/6,0,0,1/6,0,0,1/6"},
  };
  for (const auto& [w, n, p, want] : table) {
    c.check(std::string("canonical ") + w + " at (" + std::to_string(n) + "," + std::to_string(p) + ")", want,
            to_string(canonical(parse_word(w), n, p)));
  }
  for (auto [n, p] : {std::pair<std::size_t, std::size_t>{3, 7}, {3, 11}, {4, 13}}) {
    const auto d = canonical_context(n, p).d;
    c.check("number of canonical guarantees at (" + std::to_string(n) + "," + std::to_string(p) + ")",
            std::to_string((std::size_t(1) << (d + 1)) - 2), std::to_string(enumerate_canonical(n, p).size()));
  }
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    RankLottery l = uniform(2);
    do l = c.random_lottery(2 + i % 7);
    while (sgn(l.min_entry()) != 0);
    const std::size_t n = 2 + i % 4;
    if (rd_compose_direct(l, n) != rd_compose_via_dual(l, n)) ++bad;
  }
  c.check("direct and dual RD composition agree on 100 boundary lotteries", "0 failures",
          std::to_string(bad) + " failures");
}

void interval_p6(Ctx& c) {
  c.maximal("midpoint of [UNI, VT]", mix(Rational(1, 2), uniform(6), vt(3, 6)), 3, true);
  c.maximal("midpoint of [UNI, RD]", mix(Rational(1, 2), uniform(6), rd(3, 6)), 3, true);
  c.maximal("midpoint of [VT, RD]", mix(Rational(1, 2), vt(3, 6), rd(3, 6)), 3, false);
  // Strictly inside the triangle UNI, VT, RD: feasible but off both intervals.
  Rational a = c.random_weight(6), b = c.random_weight(6);
  while (a + b >= 1) b = c.random_weight(6);
  auto l = convex_combination({a, b, 1 - a - b}, {vt(3, 6), rd(3, 6), uniform(6)});
  c.check(to_string(l) + " is feasible", "feasible", to_string(is_feasible(l, 3, c.feas()).verdict));
  c.maximal("off-interval point", l, 3, false);
}

void simplices_p7(Ctx& c) {
  const std::map<std::string, std::vector<const char*>> table{
      {"VT,VT", {"0,1/4,1/4,1/4,1/4,0,0", "0,0,1,0,0,0,0"}},
      {"VT,RD", {"0,1/4,1/4,1/4,1/4,0,0", "0,1/3,1/3,0,1/3,0,0"}},
      {"RD,VT", {"1/3,1/3,0,0,0,0,1/3", "1/4,1/4,0,1/4,0,0,1/4"}},
      {"RD,RD", {"1/3,1/3,0,0,0,0,1/3", "1/6,1/6,1/6,1/6,0,1/6,1/6"}},
  };
  std::set<RankLottery> done;
  for (const auto& [w, want] : table) {
    auto simplex = prefix_simplex(parse_word(w), 3, 7);
    c.check("simplex " + w + " has UNI(7) and its prefixes as vertices",
            "1/7,1/7,1/7,1/7,1/7,1/7,1/7 | " + std::string(want[0]) + " | " + want[1],
            to_string(simplex[0]) + " | " + to_string(simplex[1]) + " | " + to_string(simplex[2]));
    for (const auto& v : simplex)
      if (done.insert(v).second) c.maximal("vertex", v, 3, true);
    auto centroid = convex_combination({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, simplex);
    c.maximal("centroid of " + w, centroid, 3, true);
  }
  auto extra = L("1/3,0,0,1/3,1/3,0,0");
  c.maximal("extra boundary guarantee", extra, 3, true);
  c.check("dual of 1/3,0,0,1/3,1/3,0,0", "1/4,1/4,0,0,1/4,1/4,0", to_string(dual(extra)));
  c.maximal("its dual", dual(extra), 3, true);
}

void covers(Ctx& c, std::size_t n, std::size_t p, const std::vector<const char*>& extra) {
  std::vector<RankLottery> boundary{vt(n, p), rd(n, p)};
  for (auto s : extra) boundary.push_back(L(s));
  for (const auto& g : boundary) {
    c.maximal("boundary guarantee", g, n, true);
    c.maximal("midpoint of [UNI, " + to_string(g) + "]", mix(Rational(1, 2), uniform(p), g), n, true);
  }
  if (p == 5) {
    c.check_bool("two outcomes meet every agent's top two at every canonical (3,5) profile",
                 !cover_counterexample(3, 5, 2, 2, true));
    c.check_bool("two outcomes meet every agent's worst two at every canonical (3,5) profile",
                 !cover_counterexample(3, 5, 2, 2, false));
  }
  for (auto mode : {CoverMode::PairTop, CoverMode::PairBottom}) {
    auto proto = cover_protocol(n, p, mode);
    auto r = worst_case_guarantee(proto.spec, n, p);
    c.check("worst case of " + to_string(proto.spec), to_string(mode == CoverMode::PairTop ? boundary[2] : dual(boundary[2])),
            r.achieved ? to_string(*r.achieved) : r.limit_reason);
  }
}

void protocols(Ctx& c) {
  for (auto [text, want] : {std::pair<const char*, RankLottery>{"veto(1); uniform", vt(3, 6)},
                            {"rd(pad)", rd(3, 6)},
                            {"rd", L("2/3,0,0,0,0,1/3")}}) {
    auto spec = parse_protocol(text);
    auto r = worst_case_guarantee(spec, 3, 6);
    c.check(std::string("worst case of ") + text + " at (3,6)", to_string(want),
            r.achieved ? to_string(*r.achieved) : r.limit_reason);
    c.check_bool(std::string(text) + " safely secures " + to_string(want), verify_safe_strategy(spec, want, 3));
  }
  c.check_bool("naive dictator does not secure RD(3,6)", !verify_safe_strategy(parse_protocol("rd"), rd(3, 6), 3));
}

void infrastructure(Ctx& c) {
  int infeasible = 0, bad = 0;
  for (int i = 0; i < 60; ++i) {
    const std::size_t p = 3 + i % 4, n = 2 + i % 3;
    auto l = c.random_lottery(p, 4);
    FeasibilityOptions fo = c.feas();
    fo.use_cuts = i % 2;  // exercise LP certificates, not only cut witnesses
    auto r = is_feasible(l, n, fo);
    if (r.verdict != Verdict::Infeasible) continue;
    ++infeasible;
    if (!verify_infeasibility(l, r)) ++bad;
  }
  c.check_bool("some random lotteries are infeasible", infeasible > 0);
  c.check("infeasibility certificates re-verify", "0 failures", std::to_string(bad) + " failures");

  bool same = true;
  for (int i = 0; i < 10; ++i) {
    auto l = c.random_lottery(5, 4);
    FeasibilityOptions one = c.feas(), two = c.feas();
    one.limits.jobs = 1;
    two.limits.jobs = 2;
    auto a = is_feasible(l, 3, one), b = is_feasible(l, 3, two), again = is_feasible(l, 3, one);
    same &= a.verdict == b.verdict && a.verdict == again.verdict && a.witness_profile == again.witness_profile &&
            a.witness_profile == b.witness_profile;
    auto pr = cyclic_profile(3, 5);
    auto x = solve(implementation_lp(l, pr)), y = solve(implementation_lp(l, pr));
    same &= x.status == y.status && x.primal == y.primal;
  }
  c.check_bool("verdicts, witnesses and LP solutions repeat across runs and worker counts", same);

  int families = 0;
  bool balanced = true;
  for (std::size_t p = 2; p <= 12; ++p)
    for (std::size_t k = 1; k < p; ++k)
      for (std::size_t n = 2; n <= p; ++n)
        if (auto f = balanced_family(p, k, n)) {
          ++families;
          balanced &= is_balanced(*f) && f->sets.size() <= n;
        }
  c.check_bool("all " + std::to_string(families) + " generated balanced families are balanced", balanced);

  int violations = 0, chains = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t p = 2 + i % 4;
    auto a = c.random_lottery(p, 2), b = c.random_lottery(p, 2), d = c.random_lottery(p, 2);
    if (!dominates(a, a)) ++violations;
    if (dominates(a, b) && dominates(b, a) && a != b) ++violations;
    if (dominates(a, b) && dominates(b, d)) {
      ++chains;
      if (!dominates(a, d)) ++violations;
    }
  }
  c.check("dominance is reflexive, antisymmetric and transitive on 10^4 random triples", "0 violations",
          std::to_string(violations) + " violations");
  c.check_bool("transitivity was exercised", chains > 0);
}

struct Entry {
  SuiteInfo info;
  std::function<void(Ctx&)> body;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {{"intro-p6", "three agents, six outcomes: UNI, VT, RD maximal; three weaker guarantees dominated"}, intro_p6},
      {{"two-agent-p5", "two agents, five outcomes: maximal iff symmetric"}, [](Ctx& c) { two_agents(c, 5); }},
      {{"two-agent-p6", "two agents, six outcomes: maximal iff symmetric"}, [](Ctx& c) { two_agents(c, 6); }},
      {{"three-outcomes", "three outcomes, three or four agents: UNI is the only maximal guarantee"},
       three_outcomes},
      {{"duality", "dual maps VT to RD and is an involution"}, duality},
      {{"composition", "canonical guarantees match the published tables"}, composition},
      {{"interval-p6", "(3,6): the two intervals from UNI are maximal, other points are not"}, interval_p6},
      {{"simplices-p7", "(3,7): simplex vertices, centroids and the extra boundary pair are maximal"},
       simplices_p7},
      {{"covers-p5", "(3,5): four boundary guarantees, their intervals, and cover existence"},
       [](Ctx& c) { covers(c, 3, 5, {"1/2,0,0,1/2,0", "1/3,0,1/3,1/3,0"}); }},
      {{"covers-p7", "(4,7): six boundary guarantees and their intervals (slow, machine-derived)"},
       [](Ctx& c) {
         covers(c, 4, 7,
                {"1/2,0,0,0,1/2,0,0", "1/5,1/5,0,1/5,1/5,1/5,0", "1/3,1/9,2/9,0,0,1/3,0",
                 "1/4,0,1/4,1/4,1/12,1/6,0"});
       }},
      {{"protocols", "worst-case values of the veto, padded and naive dictator protocols"}, protocols},
      {{"infrastructure", "certificates, determinism, balanced families, dominance order"}, infrastructure},
  };
  return r;
}

}  // namespace

std::vector<SuiteInfo> list_suites() {
  std::vector<SuiteInfo> out;
  for (const auto& e : registry()) out.push_back(e.info);
  return out;
}

SuiteResult run_suite(const std::string& id, const SuiteOptions& options) {
  for (const auto& e : registry()) {
    if (e.info.id != id) continue;
    SuiteResult res;
    res.id = id;
    res.summary = e.info.summary;
    const auto start = std::chrono::steady_clock::now();
    Ctx c{options, res, Rng(options.seed)};
    e.body(c);
    res.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
  }
  throw std::invalid_argument("unknown suite '" + id + "'");
}

}  // namespace wcg
