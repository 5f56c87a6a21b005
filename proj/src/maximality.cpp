#include "wcg/maximality.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>

namespace wcg {

std::string to_string(MaxVerdict v) {
  switch (v) {
    case MaxVerdict::Maximal: return "maximal";
    case MaxVerdict::Dominated: return "dominated";
    case MaxVerdict::Undecided: return "undecided";
    case MaxVerdict::Infeasible: return "infeasible";
  }
  return "?";
}

GuaranteeCut cut_from_certificate(std::size_t n, std::size_t p, const FarkasCertificate& cert,
                                  std::string origin) {
  // Row 0 is sum(l) = 1, then agent i's k-tail row sits at 1 + i(p-1) + k-1.
  if (cert.row_multipliers.size() != 1 + n * (p - 1)) {
    throw std::invalid_argument("certificate does not match an implementation LP");
  }
  GuaranteeCut cut;
  cut.weights.assign(p - 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 1; k < p; ++k) cut.weights[k - 1] += cert.row_multipliers[1 + i * (p - 1) + k - 1];
  cut.bound = -cert.row_multipliers[0];
  cut.origin = std::move(origin);
  return cut;
}

Rational cut_lhs(const GuaranteeCut& cut, const RankLottery& mu) {
  const auto cum = mu.cumulative();
  Rational s = 0;
  for (std::size_t k = 0; k < cut.weights.size(); ++k) s += cut.weights[k] * cum[k];
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

RankLottery from_cumulative(const std::vector<Rational>& c) {
  std::vector<Rational> v;
  Rational prev = 0;
  for (const auto& x : c) {
    v.push_back(x - prev);
    prev = x;
  }
  v.push_back(1 - prev);
  return RankLottery(std::move(v));
}

// Valid inequalities known without any profile search, as cuts.
std::vector<GuaranteeCut> static_cuts(std::size_t n, std::size_t p) {
  std::vector<GuaranteeCut> out;
  auto unit = [&](std::size_t k) {
    std::vector<Rational> w(p - 1, Rational(0));
    w[k - 1] = 1;
    return w;
  };
  if (n >= p) {
    for (std::size_t k = 1; k < p; ++k) out.push_back({unit(k), Rational(k, p), "cyclic"});
  }
  if (n == 2) {
    for (std::size_t k = 1; k <= p / 2; ++k) {
      auto w = unit(k);
      w[p - k - 1] += 1;  // [mu]_1^k >= 1 - [mu]_1^{p-k}
      out.push_back({w, Rational(1), "opposed-pair"});
    }
  }
  if (k_over_p_cuts_apply(n, p)) {
    for (std::size_t k = 2; k + 2 <= p; ++k) out.push_back({unit(k), Rational(k, p), "balanced-k/p"});
  }
  return out;
}

struct Master {
  std::size_t p;
  std::vector<Rational> cap;  // cumulative of l
  std::vector<GuaranteeCut> cuts;

  // Returns the optimal cumulative vector and the slack.
  std::pair<std::vector<Rational>, Rational> solve_master() const {
    const std::size_t m = p - 1;
    LinearProgram lp(m);
    for (std::size_t k = 0; k < m; ++k) lp.set_bounds(k, Bounds{Rational(0), cap[k]});
    for (std::size_t k = 0; k + 1 < m; ++k) {
      std::vector<Rational> row(m, Rational(0));
      row[k] = 1;
      row[k + 1] = -1;
      lp.add_constraint(row, Relation::LessEq, 0);
    }
    for (const auto& c : cuts) lp.add_constraint(c.weights, Relation::GreaterEq, c.bound);
    lp.set_objective(std::vector<Rational>(m, Rational(1)), Sense::Minimize);
    auto res = solve(lp);
    if (res.status != LPStatus::Optimal) {
      throw std::logic_error("master LP lost the current guarantee (" + to_string(res.status) + ")");
    }
    Rational total = 0;
    for (const auto& x : cap) total += x;
    return {res.primal, total - res.objective_value};
  }
};

}  // namespace

ImproveResult improve(const RankLottery& l, std::size_t n, const MaximalityOptions& opt) {
  ImproveResult out;
  const std::size_t p = l.p();
  if (p == 1) {
    out.verdict = MaxVerdict::Maximal;
    return out;
  }
  const auto t0 = Clock::now();
  // Limits for one feasibility call: whatever time is left of the budget.
  auto remaining = [&]() -> std::optional<SearchLimits> {
    SearchLimits lim = opt.limits;
    if (lim.max_seconds <= 0) return lim;
    lim.max_seconds -= std::chrono::duration<double>(Clock::now() - t0).count();
    if (lim.max_seconds <= 0) return std::nullopt;
    return lim;
  };
  if (!opt.known_feasible) {
    FeasibilityOptions fopt;
    fopt.limits = opt.limits;
    auto base = is_feasible(l, n, fopt);
    if (base.verdict != Verdict::Feasible) {
      out.verdict = base.verdict == Verdict::Infeasible ? MaxVerdict::Infeasible : MaxVerdict::Undecided;
      out.infeasibility_witness = base.witness_profile;
      out.limit_reason = base.limit_reason;
      return out;
    }
  }

  Master master{p, l.cumulative(), static_cuts(n, p)};
  master.cap.pop_back();
  std::vector<Profile> working = hard_profiles(n, p);
  std::set<std::string> producing;

  auto add_cut = [&](const RankLottery& mu, const Profile& pr) {
    auto impl = implement_at_full(mu, pr);
    if (impl.lottery) throw std::logic_error("cut requested at a profile where mu is implementable");
    master.cuts.push_back(cut_from_certificate(n, p, *impl.certificate, to_string(pr)));
    producing.insert(to_string(pr));
  };

  for (out.iterations = 1; out.iterations <= opt.max_iterations; ++out.iterations) {
    auto [cum, slack] = master.solve_master();
    if (sgn(slack) == 0) {
      out.verdict = MaxVerdict::Maximal;
      break;
    }
    RankLottery mu = from_cumulative(cum);

    // Cheap round: every working profile, a bounded number of cuts.
    detail::FeasibilityProbe probe(mu, n);
    std::size_t added = 0;
    for (const auto& pr : working) {
      if (probe.feasible(pr)) continue;
      add_cut(mu, pr);
      if (++added >= opt.library_cuts_per_round) break;
    }
    if (added) continue;

    auto lim = remaining();
    if (!lim) {
      out.limit_reason = "time limit reached";
      break;
    }
    FeasibilityOptions scan;
    scan.limits = *lim;
    scan.use_cuts = false;
    scan.use_library = false;
    auto rep = is_feasible(mu, n, scan);
    if (rep.verdict == Verdict::Feasible) {
      out.verdict = MaxVerdict::Dominated;
      out.improver = mu;
      break;
    }
    if (rep.verdict == Verdict::Undecided) {
      out.limit_reason = rep.limit_reason;
      break;
    }
    working.push_back(*rep.witness_profile);
    add_cut(mu, *rep.witness_profile);
  }
  if (out.iterations > opt.max_iterations) {
    out.iterations = opt.max_iterations;
    out.limit_reason = "iteration limit reached";
  }
  out.working_profiles = producing.size();
  out.cuts = master.cuts.size();
  return out;
}

std::optional<Rational> min_tail_load(const RankLottery& l, const Profile& profile, std::size_t k) {
  const std::size_t p = l.p();
  if (k < 1 || k >= p) throw std::invalid_argument("min_tail_load: k must be in 1..p-1");
  auto base = implementation_lp(l, profile);
  LinearProgram lp(p + 1);
  for (const auto& row : base.constraints()) {
    auto coeffs = row.coeffs;
    coeffs.push_back(0);
    lp.add_constraint(coeffs, row.rel, row.rhs);
  }
  for (const auto& pref : profile.prefs) {
    std::vector<Rational> row(p + 1, Rational(0));
    for (std::size_t r = 0; r < k; ++r) row[pref.order[r]] = 1;
    row[p] = -1;
    lp.add_constraint(row, Relation::LessEq, 0);
  }
  std::vector<Rational> obj(p + 1, Rational(0));
  obj[p] = 1;
  lp.set_objective(obj, Sense::Minimize);
  auto res = solve(lp);
  if (res.status != LPStatus::Optimal) return std::nullopt;
  return res.objective_value;
}

std::optional<Profile> tight_profile(const RankLottery& l, std::size_t n, std::size_t k,
                                      std::uint64_t max_profiles) {
  const auto target = l.cumulative()[k - 1];
  auto tight = [&](const Profile& pr) {
    auto v = min_tail_load(l, pr, k);
    return v && *v == target;
  };
  for (const auto& pr : hard_profiles(n, l.p())) {
    if (tight(pr)) return pr;
  }
  if (l.p() > PermTable::kMaxP) return std::nullopt;
  ProfileSpace space(n, l.p());
  std::optional<Profile> found;
  std::uint64_t seen = 0;
  space.for_each([&](const std::uint32_t* t) {
    if (++seen > max_profiles) return false;
    auto pr = space.to_profile(t);
    if (!tight(pr)) return true;
    found = pr;
    return false;
  });
  return found;
}

MaximalityReport is_maximal(const RankLottery& l, std::size_t n, const MaximalityOptions& opt) {
  const auto t0 = Clock::now();
  MaximalityReport rep;
  auto r = improve(l, n, opt);
  rep.verdict = r.verdict;
  rep.improver = r.improver;
  rep.iterations = r.iterations;
  rep.working_profiles = r.working_profiles;
  rep.cuts = r.cuts;
  rep.limit_reason = r.limit_reason;
  if (r.verdict == MaxVerdict::Infeasible) {
    rep.infeasibility_witness = r.infeasibility_witness;
  }
  if (r.verdict == MaxVerdict::Maximal && opt.attach_witnesses) {
    for (std::size_t k = 1; k < l.p(); ++k) {
      if (auto w = tight_profile(l, n, k, opt.witness_search_profiles)) rep.witnesses.emplace(k, *w);
    }
  }
  rep.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return rep;
}

bool check_polar_certificate(const PolarCertificate& cert, const RankLottery& l,
                             const std::vector<RankLottery>& test_set) {
  const auto& z = cert.z;
  if (z.size() != l.p()) return false;
  Rational sum = 0, dot = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    sum += z[k];
    dot += z[k] * l.probs()[k];
    if (k && !(z[k - 1] < z[k])) return false;
  }
  if (sgn(sum) != 0 || sgn(dot) != 0) return false;
  for (const auto& mu : test_set) {
    if (mu.p() != z.size()) return false;
    Rational v = 0;
    for (std::size_t k = 0; k < z.size(); ++k) v += z[k] * mu.probs()[k];
    if (sgn(v) > 0) return false;
  }
  return true;
}

}  // namespace wcg
