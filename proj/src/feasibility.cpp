#include "wcg/feasibility.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "wcg/parallel.hpp"
#include "wcg/simplex_core.hpp"

namespace wcg {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

LinearProgram implementation_lp(const RankLottery& l, const Profile& profile) {
  const std::size_t p = l.p();
  if (profile.p() != p) throw std::invalid_argument("implementation_lp: profile has wrong p");
  LinearProgram lp(p);
  lp.add_constraint(std::vector<Rational>(p, Rational(1)), Relation::Equal, 1);
  const auto cum = l.cumulative();
  for (const auto& pref : profile.prefs) {
    std::vector<Rational> row(p, Rational(0));
    for (std::size_t k = 1; k < p; ++k) {
      row[pref.order[k - 1]] = 1;
      lp.add_constraint(row, Relation::LessEq, cum[k - 1]);
    }
  }
  return lp;
}

Implementation implement_at_full(const RankLottery& l, const Profile& profile) {
  make_profile(profile.prefs);  // rejects malformed or non-strict input
  auto lp = implementation_lp(l, profile);
  auto res = solve(lp);
  Implementation out;
  if (res.status == LPStatus::Optimal) {
    out.lottery = OutcomeLottery{res.primal};
  } else {
    out.certificate = res.farkas;
  }
  return out;
}

std::optional<OutcomeLottery> implement_at(const RankLottery& l, const Profile& profile) {
  return implement_at_full(l, profile).lottery;
}

bool verify_infeasibility(const RankLottery& l, const FeasibilityReport& report) {
  if (!report.witness_profile || !report.witness_certificate) return false;
  return verify_farkas(implementation_lp(l, *report.witness_profile), *report.witness_certificate);
}

// ---------------------------------------------------------------------------
// Balanced families and cuts

bool k_over_p_cuts_apply(std::size_t n, std::size_t p) {
  return p + 2 <= 2 * n || (p == 2 * n && n != 4 && n != 5);
}

std::optional<BalancedFamily> balanced_family(std::size_t p, std::size_t k, std::size_t n) {
  if (k < 2 || k > p / 2 || !k_over_p_cuts_apply(n, p)) return std::nullopt;
  BalancedFamily f;
  f.p = p;
  f.k = k;
  auto range = [](std::size_t from, std::size_t count) {
    std::vector<std::size_t> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
  };
  if (p % k == 0) {
    for (std::size_t i = 0; i < p / k; ++i) {
      f.sets.push_back(range(i * k + 1, k));
      f.weights.emplace_back(1);
    }
  } else if (p + 2 <= 2 * n || k + 2 <= n) {
    const std::size_t t = p / k, r = p % k;
    for (std::size_t i = 1; i <= t; ++i) {
      f.sets.push_back(range((i - 1) * k + 1, k));
      f.weights.push_back(i < t ? Rational(1) : Rational(r, k));
    }
    const auto last = f.sets.back();  // S_t, arranged cyclically
    const auto tail = range(t * k + 1, r);
    for (std::size_t start = 0; start < k; ++start) {
      std::vector<std::size_t> s;
      for (std::size_t j = 0; j < k - r; ++j) s.push_back(last[(start + j) % k]);
      s.insert(s.end(), tail.begin(), tail.end());
      std::sort(s.begin(), s.end());
      f.sets.push_back(std::move(s));
      f.weights.emplace_back(1, k);
    }
  } else {
    // p = 2n, k = n - 1, n >= 6.
    const auto S = range(1, k);
    f.sets.push_back(S);
    f.weights.emplace_back(1);
    if (k % 2 == 0) {
      std::vector<std::vector<std::size_t>> pairs;
      for (std::size_t i = 0; i < k / 2 + 1; ++i) pairs.push_back(range(k + 1 + 2 * i, 2));
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::vector<std::size_t> s;
        for (std::size_t j = 0; j < pairs.size(); ++j)
          if (j != i) s.insert(s.end(), pairs[j].begin(), pairs[j].end());
        f.sets.push_back(std::move(s));
        f.weights.emplace_back(2, k);
      }
    } else {
      const auto T = range(k + 1, 3);
      std::vector<std::vector<std::size_t>> pairs;
      for (std::size_t i = 0; i < (k - 1) / 2; ++i) pairs.push_back(range(k + 4 + 2 * i, 2));
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::vector<std::size_t> s = T;
        for (std::size_t j = 0; j < pairs.size(); ++j)
          if (j != i) s.insert(s.end(), pairs[j].begin(), pairs[j].end());
        f.sets.push_back(std::move(s));
        f.weights.emplace_back(2, k);
      }
      for (std::size_t a : T) {
        std::vector<std::size_t> s{a};
        for (const auto& pr : pairs) s.insert(s.end(), pr.begin(), pr.end());
        f.sets.push_back(std::move(s));
        f.weights.emplace_back(1, k);
      }
    }
  }
  for (auto& w : f.weights) w.canonicalize();
  if (f.sets.size() > n || !is_balanced(f)) {
    throw std::logic_error("balanced_family: construction failed its own check");
  }
  return f;
}

bool is_balanced(const BalancedFamily& family) {
  if (family.sets.size() != family.weights.size()) return false;
  std::vector<Rational> cover(family.p, Rational(0));
  for (std::size_t i = 0; i < family.sets.size(); ++i) {
    if (family.sets[i].size() != family.k || sgn(family.weights[i]) <= 0) return false;
    std::set<std::size_t> uniq(family.sets[i].begin(), family.sets[i].end());
    if (uniq.size() != family.k) return false;
    for (std::size_t e : family.sets[i]) {
      if (e < 1 || e > family.p) return false;
      cover[e - 1] += family.weights[i];
    }
  }
  return std::all_of(cover.begin(), cover.end(), [](const Rational& c) { return c == 1; });
}

Profile balanced_family_profile(const BalancedFamily& family, std::size_t n) {
  if (family.sets.size() > n) throw std::invalid_argument("family larger than agent count");
  Profile out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = family.sets[i < family.sets.size() ? i : 0];
    std::vector<Outcome> order;
    std::vector<bool> used(family.p, false);
    for (std::size_t e : s) {
      order.push_back(static_cast<Outcome>(e - 1));
      used[e - 1] = true;
    }
    for (std::size_t o = 0; o < family.p; ++o)
      if (!used[o]) order.push_back(static_cast<Outcome>(o));
    out.prefs.push_back(make_preference(std::move(order)));
  }
  return out;
}

namespace {

Profile opposed_profile(std::size_t n, std::size_t p) {
  Profile out;
  std::vector<Outcome> up(p);
  std::iota(up.begin(), up.end(), Outcome(0));
  std::vector<Outcome> down(up.rbegin(), up.rend());
  for (std::size_t i = 0; i < n; ++i) out.prefs.push_back(Preference{i % 2 ? down : up});
  return out;
}

}  // namespace

std::optional<CutViolation> necessary_cuts(const RankLottery& l, std::size_t n) {
  const std::size_t p = l.p();
  const auto cum = l.cumulative();
  if (n >= p) {
    for (std::size_t k = 1; k < p; ++k) {
      if (cum[k - 1] < Rational(k, p)) {
        return CutViolation{"cyclic profile: [l]_1^" + std::to_string(k) + " < " + std::to_string(k) +
                                "/" + std::to_string(p),
                            cyclic_profile(n, p)};
      }
    }
  }
  if (n == 2) {
    for (std::size_t k = 1; k <= p / 2; ++k) {
      if (cum[k - 1] < 1 - cum[p - k - 1]) {
        return CutViolation{"opposed pair: [l]_1^" + std::to_string(k) + " < [l]_" +
                                std::to_string(p + 1 - k) + "^" + std::to_string(p),
                            opposed_profile(n, p)};
      }
    }
  }
  if (k_over_p_cuts_apply(n, p)) {
    for (std::size_t k = 2; k + 2 <= p; ++k) {
      if (cum[k - 1] >= Rational(k, p)) continue;
      CutViolation v{"balanced family: [l]_1^" + std::to_string(k) + " < " + std::to_string(k) +
                         "/" + std::to_string(p),
                     std::nullopt};
      if (auto fam = balanced_family(p, k, n)) v.witness = balanced_family_profile(*fam, n);
      return v;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Cardinal falsifier

Rational cardinal_value(const RankLottery& l, const std::vector<std::vector<Rational>>& utilities) {
  Rational total = 0;
  for (auto u : utilities) {
    if (u.size() != l.p()) throw std::invalid_argument("cardinal_value: dimension mismatch");
    std::sort(u.begin(), u.end());
    for (std::size_t k = 0; k < u.size(); ++k) total += l.probs()[k] * u[k];
  }
  return total;
}

std::optional<CardinalViolation> cardinal_falsifier(const RankLottery& l, std::size_t n,
                                                    std::size_t samples, std::uint64_t seed,
                                                    int range) {
  const std::size_t p = l.p();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-range, range);
  std::vector<std::vector<Rational>> u(n, std::vector<Rational>(p));
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<long> colsum(p, 0);
    std::vector<std::vector<long>> raw(n, std::vector<long>(p));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < p; ++a) {
        raw[i][a] = dist(rng);
        colsum[a] += raw[i][a];
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < p; ++a) {
        u[i][a] = Rational(raw[i][a]) - Rational(colsum[a], static_cast<long>(n));
        u[i][a].canonicalize();
      }
    Rational v = cardinal_value(l, u);
    if (sgn(v) > 0) return CardinalViolation{u, v};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Profile library

namespace {

std::mutex library_mu;
std::map<std::pair<std::size_t, std::size_t>, std::vector<Profile>> library_cache;

std::vector<Profile> build_library(std::size_t n, std::size_t p) {
  std::vector<Profile> out;
  std::set<std::string> seen;
  auto add = [&](const Profile& pr) {
    auto c = canonicalize(pr);
    if (seen.insert(to_string(c)).second) out.push_back(std::move(c));
  };
  add(identical_profile(n, p));
  add(cyclic_profile(n, p));
  add(opposed_profile(n, p));
  for (std::size_t k = 2; k <= p / 2; ++k) {
    if (auto fam = balanced_family(p, k, n)) add(balanced_family_profile(*fam, n));
  }
  if (p > n) {
    const std::size_t q = p - n;
    std::vector<Profile> inner;
    if (q <= 5 && count_canonical_profiles(n, q) <= 4000) {
      inner = enumerate_profiles(n, q);
    } else {
      inner = hard_profiles(n, q);
    }
    for (const auto& pr : inner) {
      add(cyclic_pad_profile(pr));
      add(rd_pad_profile(pr));
    }
  }
  return out;
}

}  // namespace

std::vector<Profile> hard_profiles(std::size_t n, std::size_t p) {
  {
    std::lock_guard<std::mutex> lock(library_mu);
    auto it = library_cache.find({n, p});
    if (it != library_cache.end()) return it->second;
  }
  auto lib = build_library(n, p);
  std::lock_guard<std::mutex> lock(library_mu);
  library_cache.emplace(std::make_pair(n, p), lib);
  return lib;
}

// ---------------------------------------------------------------------------
// Fast probe

namespace detail {

namespace {

constexpr std::size_t kMaxOutcomes = 32;
constexpr std::size_t kPoolSize = 12;

struct PoolEntry {
  std::array<std::int64_t, kMaxOutcomes> w{};
  std::array<std::int64_t, kMaxOutcomes> thr{};  // floor(c_k * scale), k = 1..p-1
};

template <class T>
struct SolvedLP {
  bool feasible = false;
  std::vector<T> x;
};

}  // namespace

struct FeasibilityProbe::Impl {
  std::size_t n, p;
  std::size_t kmax;  // largest k with c_k < 1
  std::vector<Rational> cum;
  std::vector<SmallRational> cum_small;
  bool small_ok = true;
  std::vector<PoolEntry> pool;
  std::size_t next_slot = 0;
  std::size_t last_hit = 0;
  std::uint64_t lp_calls = 0, pool_hits = 0;
  std::vector<OutcomeSet> masks;
  std::vector<std::size_t> mask_k;

  bool pool_check(const PoolEntry& e, const Outcome* const* orders) const {
    for (std::size_t i = 0; i < n; ++i) {
      const Outcome* o = orders[i];
      std::int64_t run = 0;
      for (std::size_t k = 1; k <= kmax; ++k) {
        run += e.w[o[k - 1]];
        if (run > e.thr[k]) return false;
      }
    }
    return true;
  }

  void collect_rows(const Outcome* const* orders) {
    masks.clear();
    mask_k.clear();
    for (std::size_t i = 0; i < n; ++i) {
      OutcomeSet s = 0;
      for (std::size_t k = 1; k <= kmax; ++k) {
        s |= OutcomeSet(1) << orders[i][k - 1];
        if (std::find(masks.begin(), masks.end(), s) == masks.end()) {
          masks.push_back(s);
          mask_k.push_back(k);
        }
      }
    }
  }

  template <class T>
  SolvedLP<T> solve_rows(const std::vector<T>& c) const {
    CoreProblem<T> pr;
    pr.rows = masks.size() + 1;
    pr.cols = p;
    pr.a.assign(pr.rows * p, T(0));
    for (std::size_t r = 0; r < masks.size(); ++r) {
      for (std::size_t o = 0; o < p; ++o)
        if (masks[r] >> o & 1u) pr.a[r * p + o] = T(1);
      pr.b.push_back(c[mask_k[r] - 1]);
    }
    for (std::size_t o = 0; o < p; ++o) pr.a[masks.size() * p + o] = T(1);
    pr.b.push_back(T(1));
    pr.c.assign(p, T(1));
    auto res = solve_core(pr);
    SolvedLP<T> out;
    out.feasible = res.status == CoreStatus::Optimal && res.value == T(1);
    out.x = std::move(res.x);
    return out;
  }

  void remember(const std::vector<SmallRational>& x) {
    // Common denominator, then thresholds floor(c_k * scale).
    __int128 scale = 1;
    for (const auto& v : x) {
      const std::int64_t d = v.den();
      const __int128 g = std::gcd(static_cast<std::int64_t>(scale), d);
      scale = scale / g * d;
      if (scale > (std::int64_t(1) << 40)) return;
    }
    PoolEntry e;
    for (std::size_t o = 0; o < p; ++o) {
      e.w[o] = static_cast<std::int64_t>(x[o].num() * (scale / x[o].den()));
    }
    for (std::size_t k = 1; k < p; ++k) {
      const mpz_class prod = cum[k - 1].get_num() * mpz_class(static_cast<long>(scale));
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), prod.get_mpz_t(), cum[k - 1].get_den_mpz_t());
      e.thr[k] = q.get_si();
    }
    if (pool.size() < kPoolSize) {
      pool.push_back(e);
      last_hit = pool.size() - 1;
    } else {
      pool[next_slot] = e;
      last_hit = next_slot;
      next_slot = (next_slot + 1) % kPoolSize;
    }
  }

  bool check(const Outcome* const* orders) {
    if (kmax == 0) return true;
    if (!pool.empty()) {
      if (pool_check(pool[last_hit], orders)) {
        ++pool_hits;
        return true;
      }
      for (std::size_t j = 0; j < pool.size(); ++j) {
        if (j == last_hit) continue;
        if (pool_check(pool[j], orders)) {
          last_hit = j;
          ++pool_hits;
          return true;
        }
      }
    }
    ++lp_calls;
    collect_rows(orders);
    if (small_ok) {
      try {
        auto r = solve_rows(cum_small);
        if (r.feasible) remember(r.x);
        return r.feasible;
      } catch (const RationalOverflow&) {
      }
    }
    return solve_rows(cum).feasible;
  }
};

FeasibilityProbe::FeasibilityProbe(const RankLottery& l, std::size_t n)
    : impl_(std::make_unique<Impl>()) {
  if (l.p() > kMaxOutcomes) throw std::invalid_argument("at most 32 outcomes supported");
  impl_->n = n;
  impl_->p = l.p();
  impl_->cum = l.cumulative();
  impl_->kmax = 0;
  for (std::size_t k = 1; k < l.p(); ++k) {
    if (impl_->cum[k - 1] < 1) impl_->kmax = k;
  }
  try {
    for (const auto& c : impl_->cum) impl_->cum_small.push_back(to_small(c));
  } catch (const RationalOverflow&) {
    impl_->small_ok = false;
  }
}

FeasibilityProbe::~FeasibilityProbe() = default;

bool FeasibilityProbe::feasible(const Outcome* const* orders) { return impl_->check(orders); }

bool FeasibilityProbe::feasible(const Profile& profile) {
  if (profile.n() != impl_->n || profile.p() != impl_->p) {
    throw std::invalid_argument("probe: profile shape mismatch");
  }
  std::vector<const Outcome*> orders;
  for (const auto& pref : profile.prefs) orders.push_back(pref.order.data());
  return impl_->check(orders.data());
}

std::uint64_t FeasibilityProbe::lp_calls() const { return impl_->lp_calls; }
std::uint64_t FeasibilityProbe::pool_hits() const { return impl_->pool_hits; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Full decision

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct ScanResult {
  bool complete = false;
  std::optional<Profile> failure;
  std::uint64_t checked = 0;
  std::string limit_reason;
};

ScanResult scan_all(const RankLottery& l, std::size_t n, const SearchLimits& limits,
                    Clock::time_point t0) {
  ScanResult out;
  if (l.p() > PermTable::kMaxP) {
    out.limit_reason = "exhaustive enumeration supports p <= " + std::to_string(PermTable::kMaxP);
    return out;
  }
  ProfileSpace space(n, l.p());
  const std::size_t chunks = space.chunk_count();
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<std::size_t> fail_chunk{std::numeric_limits<std::size_t>::max()};
  std::atomic<std::uint64_t> checked{0};
  std::atomic<bool> limit_hit{false};
  std::mutex mu;
  std::vector<std::uint32_t> fail_tuple;
  std::string reason;

  run_workers(limits.jobs, [&](unsigned) {
    detail::FeasibilityProbe probe(l, n);
    std::vector<const Outcome*> orders(n);
    std::uint64_t batch = 0;
    for (;;) {
      if (limit_hit.load(std::memory_order_relaxed)) break;
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= chunks || c > fail_chunk.load()) break;
      space.for_each_in_chunk(c, [&](const std::uint32_t* t) {
        if (++batch == 256) {
          const auto total = checked.fetch_add(batch) + batch;
          batch = 0;
          if (limits.max_profiles && total >= limits.max_profiles) {
            std::lock_guard<std::mutex> lock(mu);
            if (reason.empty()) reason = "profile limit reached";
            limit_hit = true;
          }
          if (limits.max_seconds > 0 && elapsed_ms(t0) > limits.max_seconds * 1000) {
            std::lock_guard<std::mutex> lock(mu);
            if (reason.empty()) reason = "time limit reached";
            limit_hit = true;
          }
          if (limit_hit.load(std::memory_order_relaxed)) return false;
          if (c > fail_chunk.load()) return false;
        }
        for (std::size_t i = 0; i < n; ++i) orders[i] = space.perms().perm(t[i]);
        if (probe.feasible(orders.data())) return true;
        std::lock_guard<std::mutex> lock(mu);
        if (c < fail_chunk.load()) {
          fail_chunk = c;
          fail_tuple.assign(t, t + n);
        }
        return false;
      });
    }
    checked.fetch_add(batch);
  });
  out.checked = checked.load();
  if (!fail_tuple.empty()) {
    out.failure = space.to_profile(fail_tuple.data());
    out.complete = true;
  } else if (limit_hit) {
    out.limit_reason = reason;
  } else {
    out.complete = true;
  }
  return out;
}

void attach_certificate(const RankLottery& l, FeasibilityReport& rep, const Profile& witness) {
  auto impl = implement_at_full(l, witness);
  if (impl.lottery) {
    throw std::logic_error("fast check and exact LP disagree at profile " + to_string(witness));
  }
  rep.witness_profile = witness;
  rep.witness_certificate = impl.certificate;
}

}  // namespace

FeasibilityReport is_feasible(const RankLottery& l, std::size_t n, const FeasibilityOptions& opt) {
  const auto t0 = Clock::now();
  if (n < 1) throw std::invalid_argument("is_feasible: n must be positive");
  FeasibilityReport rep;
  const std::size_t p = l.p();

  if (opt.use_cuts) {
    if (n >= p) rep.cuts_used.push_back("cyclic");
    if (n == 2) rep.cuts_used.push_back("opposed-pair");
    if (k_over_p_cuts_apply(n, p) && p >= 4) rep.cuts_used.push_back("balanced-k/p");
    if (auto v = necessary_cuts(l, n)) {
      rep.verdict = Verdict::Infeasible;
      rep.violated_cut = v->description;
      if (v->witness) {
        attach_certificate(l, rep, canonicalize(*v->witness));
      } else {
        // The cut alone is a proof; look for a concrete profile within limits.
        FeasibilityOptions inner = opt;
        inner.use_cuts = false;
        auto found = is_feasible(l, n, inner);
        if (found.witness_profile) {
          rep.witness_profile = found.witness_profile;
          rep.witness_certificate = found.witness_certificate;
        }
        rep.profiles_checked = found.profiles_checked;
      }
      rep.runtime_ms = elapsed_ms(t0);
      return rep;
    }
  }

  if (opt.use_library) {
    detail::FeasibilityProbe probe(l, n);
    for (const auto& pr : hard_profiles(n, p)) {
      if (!probe.feasible(pr)) {
        rep.verdict = Verdict::Infeasible;
        attach_certificate(l, rep, pr);
        rep.runtime_ms = elapsed_ms(t0);
        return rep;
      }
    }
  }

  auto scan = scan_all(l, n, opt.limits, t0);
  rep.profiles_checked = scan.checked;
  if (scan.failure) {
    rep.verdict = Verdict::Infeasible;
    attach_certificate(l, rep, *scan.failure);
  } else if (scan.complete) {
    rep.verdict = Verdict::Feasible;
  } else {
    rep.verdict = Verdict::Undecided;
    rep.limit_reason = scan.limit_reason;
  }
  rep.runtime_ms = elapsed_ms(t0);
  return rep;
}

}  // namespace wcg
