#include "wcg/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wcg {

bool Stage::terminal() const {
  switch (kind) {
    case Kind::Uniform:
    case Kind::Cover: return true;
    case Kind::Dictator: return weight == 1;
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Text form

namespace {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("protocol: " + what + " at offset " + std::to_string(i));
  }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string word() {
    skip();
    std::string w;
    while (i < s.size() && (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) w += s[i++];
    return w;
  }
  std::string number() {
    skip();
    std::string w;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) w += s[i++];
    if (w.empty()) fail("expected a number");
    return w;
  }
  std::size_t count() {
    const std::size_t at = i;
    auto w = number();
    if (w.find('/') != std::string::npos) {
      i = at;
      fail("expected an integer");
    }
    return std::stoul(w);
  }
};

}  // namespace

ProtocolSpec parse_protocol(std::string_view text) {
  ProtocolSpec spec;
  Cursor c{text};
  for (;;) {
    const std::size_t at = (c.skip(), c.i);
    const std::string name = c.word();
    Stage st;
    if (name == "veto") {
      st.kind = Stage::Kind::Veto;
      if (!c.eat('(')) c.fail("expected '('");
      st.count = c.count();
      if (!c.eat(')')) c.fail("expected ')'");
    } else if (name == "avoid" || name == "cover") {
      st.kind = name == "cover" ? Stage::Kind::Cover : Stage::Kind::Avoid;
      if (!c.eat('(')) c.fail("expected '('");
      st.size = c.count();
      if (!c.eat(',')) c.fail("expected ','");
      st.count = c.count();
      if (!c.eat(')')) c.fail("expected ')'");
    } else if (name == "rd") {
      st.kind = Stage::Kind::Dictator;
      st.count = 1;
      if (c.eat('(')) {
        const std::size_t mode_at = c.i;
        const std::string mode = c.word();
        if (mode == "pad") {
          st.pad = true;
        } else if (mode != "naive") {
          c.i = mode_at;
          c.fail("expected 'pad' or 'naive'");
        }
        if (c.eat(',')) {
          st.count = c.count();
          if (c.eat(',')) {
            const std::size_t w_at = (c.skip(), c.i);
            try {
              st.weight = parse_rational(c.number());
            } catch (const std::invalid_argument&) {
              c.i = w_at;
              c.fail("bad weight");
            }
            if (sgn(st.weight) <= 0 || st.weight > 1) {
              c.i = w_at;
              c.fail("weight must be in (0,1]");
            }
          }
        }
        if (!c.eat(')')) c.fail("expected ')'");
      }
    } else if (name == "uniform") {
      st.kind = Stage::Kind::Uniform;
    } else {
      c.i = at;
      c.fail("unknown stage '" + name + "'");
    }
    if ((st.kind != Stage::Kind::Uniform && st.count == 0) ||
        ((st.kind == Stage::Kind::Cover || st.kind == Stage::Kind::Avoid) && st.size == 0)) {
      c.i = at;
      c.fail("stage sizes must be positive");
    }
    spec.stages.push_back(st);
    if (c.eat(';')) continue;
    c.skip();
    if (c.i != text.size()) c.fail("unexpected character");
    break;
  }
  return spec;
}

std::string to_string(const ProtocolSpec& spec) {
  std::ostringstream os;
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& st = spec.stages[i];
    if (i) os << "; ";
    switch (st.kind) {
      case Stage::Kind::Veto: os << "veto(" << st.count << ")"; break;
      case Stage::Kind::Avoid: os << "avoid(" << st.size << ", " << st.count << ")"; break;
      case Stage::Kind::Cover: os << "cover(" << st.size << ", " << st.count << ")"; break;
      case Stage::Kind::Uniform: os << "uniform"; break;
      case Stage::Kind::Dictator:
        if (!st.pad && st.count == 1 && st.weight == 1) {
          os << "rd";
        } else {
          os << "rd(" << (st.pad ? "pad" : "naive");
          if (st.count != 1 || st.weight != 1) os << ", " << st.count;
          if (st.weight != 1) os << ", " << to_string(st.weight);
          os << ")";
        }
        break;
    }
  }
  return os.str();
}

void validate(const ProtocolSpec& spec, std::size_t n, std::size_t p) {
  if (spec.stages.empty()) throw std::invalid_argument("protocol has no stages");
  std::size_t left = p;
  bool ended = false;
  for (const auto& st : spec.stages) {
    if (ended) {
      if (st.kind != Stage::Kind::Uniform) throw std::invalid_argument("stage after a final stage");
      continue;
    }
    if (st.needs_reports() && st.count > left) {
      throw std::invalid_argument("stage asks for more outcomes than can survive");
    }
    switch (st.kind) {
      case Stage::Kind::Veto: left = left > n * st.count ? left - n * st.count : 0; break;
      case Stage::Kind::Avoid: left = left > st.size ? left - st.size : 0; break;
      case Stage::Kind::Dictator:
        if (!st.terminal()) left = left > n * st.count ? left - n * st.count : 0;
        break;
      default: break;
    }
    if (left == 0) throw std::invalid_argument("removals can exhaust all outcomes");
    if (st.terminal()) ended = true;
  }
  if (!ended) throw std::invalid_argument("protocol has no final stage");
}

// ---------------------------------------------------------------------------
// Play

namespace {

struct PlayState {
  std::vector<bool> surv;
  Rational mass = 1;
  std::vector<Rational> dist;
  bool done = false;
};

std::vector<Outcome> ordered_survivors(const std::vector<bool>& surv, PadOrder order) {
  std::vector<Outcome> v;
  for (std::size_t o = 0; o < surv.size(); ++o)
    if (surv[o]) v.push_back(static_cast<Outcome>(o));
  if (order == PadOrder::HighestFirst) std::reverse(v.begin(), v.end());
  return v;
}

// First size-subset of the survivors (lexicographic in pad order) meeting
// every report.
std::optional<std::vector<Outcome>> first_cover(const std::vector<Outcome>& pool, std::size_t size,
                                                const std::vector<std::vector<Outcome>>& reports) {
  const std::size_t m = std::min(size, pool.size());
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    bool ok = true;
    for (const auto& r : reports) {
      bool meets = false;
      for (auto j : idx) meets |= std::find(r.begin(), r.end(), pool[j]) != r.end();
      if (!meets) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<Outcome> out;
      for (auto j : idx) out.push_back(pool[j]);
      return out;
    }
    std::size_t pos = m;
    while (pos > 0 && idx[pos - 1] == pool.size() - m + pos - 1) --pos;
    if (pos == 0) return std::nullopt;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void spread(PlayState& s, const std::vector<Outcome>& set, const Rational& w) {
  Rational each = s.mass * w / Rational(set.size());
  for (auto o : set) s.dist[o] += each;
}

void apply(const Stage& st, const ProtocolSpec& spec, std::size_t n, PlayState& s,
           const std::vector<std::vector<Outcome>>& reports) {
  switch (st.kind) {
    case Stage::Kind::Veto:
      for (const auto& r : reports)
        for (auto o : r) s.surv[o] = false;
      break;
    case Stage::Kind::Avoid:
    case Stage::Kind::Cover: {
      auto pool = ordered_survivors(s.surv, spec.pad_order);
      auto cov = first_cover(pool, st.size, reports);
      if (!cov) throw std::runtime_error("no cover of size " + std::to_string(st.size) + " exists");
      if (st.kind == Stage::Kind::Cover) {
        spread(s, *cov, 1);
        s.done = true;
      } else {
        for (auto o : *cov) s.surv[o] = false;
      }
      break;
    }
    case Stage::Kind::Uniform:
      spread(s, ordered_survivors(s.surv, spec.pad_order), 1);
      s.done = true;
      break;
    case Stage::Kind::Dictator: {
      std::vector<Outcome> drawn;
      if (!st.pad) {
        for (const auto& r : reports) {
          Rational each = s.mass * st.weight / Rational(n * r.size());
          for (auto o : r) s.dist[o] += each;
          drawn.insert(drawn.end(), r.begin(), r.end());
        }
      } else {
        const bool same = std::all_of(reports.begin(), reports.end(), [&](const auto& r) {
          auto a = r, b = reports.front();
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          return a == b;
        });
        for (const auto& r : reports)
          for (auto o : r)
            if (std::find(drawn.begin(), drawn.end(), o) == drawn.end()) drawn.push_back(o);
        if (!(same && st.terminal())) {
          const std::size_t target = std::min(n * st.count, static_cast<std::size_t>(
                                                                 std::count(s.surv.begin(), s.surv.end(), true)));
          for (auto o : ordered_survivors(s.surv, spec.pad_order)) {
            if (drawn.size() >= target) break;
            if (std::find(drawn.begin(), drawn.end(), o) == drawn.end()) drawn.push_back(o);
          }
        }
        spread(s, drawn, st.weight);
      }
      if (st.terminal()) {
        s.done = true;
      } else {
        s.mass *= 1 - st.weight;
        for (auto o : drawn) s.surv[o] = false;
      }
      break;
    }
  }
}

void check_report(const Stage& st, const std::vector<Outcome>& r, const std::vector<bool>& surv) {
  if (r.size() != st.count) throw std::invalid_argument("report has the wrong size");
  std::vector<Outcome> sorted = r;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("report repeats an outcome");
  }
  for (auto o : r)
    if (o >= surv.size() || !surv[o]) throw std::invalid_argument("report names a removed or unknown outcome");
}

}  // namespace

OutcomeLottery run(const ProtocolSpec& spec, std::size_t n, std::size_t p, const Reports& reports) {
  validate(spec, n, p);
  PlayState s{std::vector<bool>(p, true), 1, std::vector<Rational>(p, Rational(0)), false};
  std::size_t next = 0;
  for (const auto& st : spec.stages) {
    if (s.done) break;
    std::vector<std::vector<Outcome>> rep;
    if (st.needs_reports()) {
      if (next >= reports.size()) throw std::invalid_argument("missing reports for a stage");
      rep = reports[next++];
      if (rep.size() != n) throw std::invalid_argument("need one report per agent");
      for (const auto& r : rep) check_report(st, r, s.surv);
    }
    apply(st, spec, n, s, rep);
  }
  if (next != reports.size()) throw std::invalid_argument("more report rounds than stages");
  for (auto& x : s.dist) x.canonicalize();
  return OutcomeLottery{s.dist};
}

std::vector<Outcome> safe_report(const Stage& st, const Preference& pref, const std::vector<bool>& survivors) {
  std::vector<Outcome> alive;
  for (auto o : pref.order)
    if (survivors[o]) alive.push_back(o);
  const bool worst = st.kind == Stage::Kind::Veto || st.kind == Stage::Kind::Avoid;
  if (worst) return {alive.begin(), alive.begin() + st.count};
  return {alive.end() - st.count, alive.end()};
}

// ---------------------------------------------------------------------------
// Worst case

namespace {

std::vector<std::vector<Outcome>> subsets(const std::vector<bool>& surv, std::size_t k) {
  std::vector<Outcome> pool;
  for (std::size_t o = 0; o < surv.size(); ++o)
    if (surv[o]) pool.push_back(static_cast<Outcome>(o));
  std::vector<std::vector<Outcome>> out;
  if (k > pool.size()) return out;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<Outcome> s;
    for (auto j : idx) s.push_back(pool[j]);
    out.push_back(std::move(s));
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == pool.size() - k + pos - 1) --pos;
    if (pos == 0) return out;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::string show(const std::vector<std::vector<Outcome>>& reps) {
  std::string s;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (i) s += " | ";
    for (std::size_t j = 0; j < reps[i].size(); ++j) {
      if (j) s += ' ';
      s += std::to_string(reps[i][j] + 1);
    }
  }
  return s;
}

struct Evaluator {
  const ProtocolSpec& spec;
  std::size_t n, p;
  Preference pref;
  std::uint64_t budget;
  std::vector<Rational> best;
  std::map<std::size_t, std::string> where;
  std::uint64_t leaves = 0;
  bool over = false;
  // Visitor for leaves; returns false to stop.
  std::function<bool(const std::vector<Rational>&)> on_leaf;

  void leaf(const PlayState& s, const std::string& hist) {
    if (++leaves > budget) {
      over = true;
      return;
    }
    std::vector<Rational> cum(p);
    Rational run = 0;
    for (std::size_t k = 0; k < p; ++k) {
      run += s.dist[pref.order[k]];
      cum[k] = run;
      if (run > best[k] || where.count(k + 1) == 0) {
        best[k] = run;
        where[k + 1] = hist;
      }
    }
    if (on_leaf && !on_leaf(cum)) over = true;
  }

  void go(std::size_t stage, const PlayState& s, const std::string& hist) {
    if (over) return;
    if (s.done || stage == spec.stages.size()) {
      leaf(s, hist);
      return;
    }
    const Stage& st = spec.stages[stage];
    if (!st.needs_reports()) {
      PlayState t = s;
      apply(st, spec, n, t, {});
      go(stage + 1, t, hist);
      return;
    }
    auto legal = subsets(s.surv, st.count);
    auto own = safe_report(st, pref, s.surv);
    std::vector<std::size_t> pick(n - 1, 0);  // nondecreasing: adversaries are interchangeable
    for (;;) {
      std::vector<std::vector<Outcome>> reps{own};
      for (auto j : pick) reps.push_back(legal[j]);
      PlayState t = s;
      apply(st, spec, n, t, reps);
      go(stage + 1, t, hist.empty() ? show(reps) : hist + " ; " + show(reps));
      if (over) return;
      std::size_t pos = pick.size();
      while (pos > 0 && pick[pos - 1] + 1 == legal.size()) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t j = pos; j < pick.size(); ++j) pick[j] = pick[pos - 1];
    }
  }
};

template <class F>
void for_each_agent1_order(std::size_t p, bool all, F&& f) {
  std::vector<Outcome> order(p);
  std::iota(order.begin(), order.end(), Outcome(0));
  do {
    if (!f(Preference{order})) return;
  } while (all && std::next_permutation(order.begin(), order.end()));
}

}  // namespace

EvalReport worst_case_guarantee(const ProtocolSpec& spec, std::size_t n, std::size_t p,
                                const EvalOptions& opt) {
  validate(spec, n, p);
  EvalReport rep;
  std::vector<Rational> best(p, Rational(0));
  std::uint64_t used = 0;
  bool over = false;
  for_each_agent1_order(p, opt.all_agent1_orders, [&](const Preference& pref) {
    Evaluator ev{spec, n, p, pref, opt.max_scenarios - used, best, {}, 0, false, nullptr};
    PlayState s{std::vector<bool>(p, true), 1, std::vector<Rational>(p, Rational(0)), false};
    ev.go(0, s, "");
    used += std::min(ev.leaves, ev.budget);
    for (std::size_t k = 0; k < p; ++k) {
      if (ev.best[k] > best[k] || (rep.worst_scenarios.count(k + 1) == 0 && ev.where.count(k + 1))) {
        best[k] = ev.best[k];
        rep.worst_scenarios[k + 1] = ev.where[k + 1];
      }
    }
    over = ev.over;
    return !over;
  });
  rep.scenario_count = used;
  if (over) {
    rep.limit_reason = "scenario budget exhausted";
    return rep;
  }
  std::vector<Rational> v(p);
  Rational prev = 0;
  for (std::size_t k = 0; k < p; ++k) {
    v[k] = best[k] - prev;
    prev = best[k];
  }
  rep.achieved = RankLottery(std::move(v));
  rep.decided = true;
  return rep;
}

bool verify_safe_strategy(const ProtocolSpec& spec, const RankLottery& l, std::size_t n,
                          const EvalOptions& opt) {
  const std::size_t p = l.p();
  validate(spec, n, p);
  const auto cap = l.cumulative();
  bool ok = true;
  for_each_agent1_order(p, opt.all_agent1_orders, [&](const Preference& pref) {
    Evaluator ev{spec, n, p, pref, opt.max_scenarios, std::vector<Rational>(p, Rational(0)), {}, 0, false,
                 nullptr};
    ev.on_leaf = [&](const std::vector<Rational>& cum) {
      for (std::size_t k = 0; k < p; ++k)
        if (cum[k] > cap[k]) return ok = false;
      return true;
    };
    PlayState s{std::vector<bool>(p, true), 1, std::vector<Rational>(p, Rational(0)), false};
    ev.go(0, s, "");
    if (ev.leaves > ev.budget) throw std::runtime_error("scenario budget exhausted");
    return ok;
  });
  return ok;
}

CoverProtocol cover_protocol(std::size_t n, std::size_t p, CoverMode mode) {
  if (p + 1 != 2 * n || n < 3) throw std::invalid_argument("cover protocols need p = 2n - 1 and n >= 3");
  CoverProtocol c;
  switch (mode) {
    case CoverMode::HalfCover:
      c.size = n - 1;
      c.depth = 2;
      break;
    case CoverMode::PairTop:
      c.size = 2;
      c.depth = n - 1;
      break;
    case CoverMode::PairBottom:
      c.size = 2;
      c.depth = n - 1;
      c.top = false;
      break;
  }
  Stage st;
  st.kind = c.top ? Stage::Kind::Cover : Stage::Kind::Avoid;
  st.size = c.size;
  st.count = c.depth;
  c.spec.stages.push_back(st);
  if (!c.top) c.spec.stages.push_back(Stage{});
  return c;
}

std::optional<Profile> cover_counterexample(std::size_t n, std::size_t p, std::size_t size,
                                            std::size_t depth, bool top) {
  ProfileSpace space(n, p);
  const auto& tab = space.perms();
  std::optional<Profile> bad;
  std::vector<OutcomeSet> sets(n);
  const OutcomeSet all = (OutcomeSet(1) << p) - 1;
  space.for_each([&](const std::uint32_t* t) {
    for (std::size_t i = 0; i < n; ++i) {
      const OutcomeSet worst = tab.tail(t[i], depth);
      sets[i] = top ? all & ~tab.tail(t[i], p - depth) : worst;
    }
    for (OutcomeSet c = 0; c <= all; ++c) {
      if (static_cast<std::size_t>(__builtin_popcount(c)) != size) continue;
      if (std::all_of(sets.begin(), sets.end(), [&](OutcomeSet s) { return (s & c) != 0; })) return true;
    }
    bad = space.to_profile(t);
    return false;
  });
  return bad;
}

}  // namespace wcg
