// Command-line front end. Exit codes: 0 pass or decided, 1 a verification
// check failed, 2 undecided (limit hit), 3 usage or input error.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include "wcg/compose.hpp"
#include "wcg/duality.hpp"
#include "wcg/feasibility.hpp"
#include "wcg/maximality.hpp"
#include "wcg/parallel.hpp"
#include "wcg/protocols.hpp"
#include "wcg/suites.hpp"

using json = nlohmann::ordered_json;
using namespace wcg;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kFail = 1, kUndecided = 2, kUsage = 3;
constexpr const char* kSchema = "wcg-cli/1";

struct Globals {
  unsigned jobs = 1;
  std::string cache;
  std::uint64_t limit_profiles = 0;
  double time_limit = 0;
  std::uint64_t seed = 2024;
  bool json = false;

  SearchLimits limits() const { return SearchLimits{limit_profiles, time_limit, resolve_jobs(jobs)}; }
};

void env_override(const char* name, auto& field) {
  if (const char* v = std::getenv(name); v && *v) {
    std::istringstream is(v);
    is >> field;
    if (!is) throw std::invalid_argument(std::string("bad value in ") + name);
  }
}

void print(const Globals& g, const json& j, const std::string& text) {
  if (g.json) {
    json out = {{"schema", kSchema}};
    out.update(j);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

json profile_json(const std::optional<Profile>& p) { return p ? json(to_string(*p)) : json(nullptr); }

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

// Results are cached per command, n and lottery; only decided results are
// stored, so a cache hit never changes a verdict.
struct Cache {
  fs::path dir;

  std::optional<fs::path> path(const std::string& cmd, std::size_t n, const RankLottery& l,
                               const std::string& flavor) const {
    if (dir.empty()) return std::nullopt;
    std::string key = to_string(l);
    for (auto& ch : key) ch = ch == '/' ? 'o' : ch == ',' ? '_' : ch;
    return dir / cmd / ("n" + std::to_string(n) + "-p" + std::to_string(l.p()) + flavor + "-" + key + ".json");
  }
  std::optional<json> load(const std::optional<fs::path>& p) const {
    if (!p || !fs::exists(*p)) return std::nullopt;
    std::ifstream in(*p);
    try {
      return json::parse(in);
    } catch (const json::parse_error&) {
      return std::nullopt;  // a torn write; recompute
    }
  }
  void store(const std::optional<fs::path>& p, const json& j) const {
    if (!p) return;
    fs::create_directories(p->parent_path());
    const fs::path tmp = p->string() + ".tmp";
    std::ofstream(tmp) << j.dump(2) << "\n";
    fs::rename(tmp, *p);
  }
};

int cmd_feasible(const Globals& g, std::size_t n, const std::string& text, bool no_cuts, bool no_library) {
  auto l = parse_lottery(text);
  Cache cache{g.cache};
  const std::string flavor = std::string(no_cuts ? "-nocuts" : "") + (no_library ? "-nolib" : "");
  auto path = cache.path("feasible", n, l, flavor);
  json j;
  if (auto hit = cache.load(path)) {
    j = *hit;
    j["cached"] = true;
  } else {
    FeasibilityOptions opt{g.limits(), !no_cuts, !no_library};
    auto r = is_feasible(l, n, opt);
    j = {{"command", "feasible"},
         {"n", n},
         {"lottery", to_string(l)},
         {"verdict", to_string(r.verdict)},
         {"witness_profile", profile_json(r.witness_profile)},
         {"violated_cut", r.violated_cut ? json(*r.violated_cut) : json(nullptr)},
         {"cuts_used", r.cuts_used},
         {"profiles_checked", r.profiles_checked},
         {"limit_reason", r.limit_reason},
         {"runtime_ms", r.runtime_ms}};
    if (r.witness_certificate) {
      j["certificate"] = {{"row_multipliers", rationals(r.witness_certificate->row_multipliers)},
                          {"upper_bound_multipliers", rationals(r.witness_certificate->upper_bound_multipliers)},
                          {"verified", verify_infeasibility(l, r)}};
    }
    if (r.verdict != Verdict::Undecided) cache.store(path, j);
    j["cached"] = false;
  }
  std::string text_out = j["verdict"].get<std::string>() + "\n";
  if (!j["witness_profile"].is_null()) text_out += "witness: " + j["witness_profile"].get<std::string>() + "\n";
  if (!j["violated_cut"].is_null()) text_out += "cut: " + j["violated_cut"].get<std::string>() + "\n";
  if (!j["limit_reason"].get<std::string>().empty()) text_out += "limit: " + j["limit_reason"].get<std::string>() + "\n";
  print(g, j, text_out);
  return j["verdict"] == "undecided" ? kUndecided : kOk;
}

json maximal_json(const RankLottery& l, std::size_t n, const MaximalityReport& r) {
  json w = json::object();
  for (const auto& [k, pr] : r.witnesses) w[std::to_string(k)] = to_string(pr);
  return {{"command", "maximal"},
          {"n", n},
          {"lottery", to_string(l)},
          {"verdict", to_string(r.verdict)},
          {"improver", r.improver ? json(to_string(*r.improver)) : json(nullptr)},
          {"witnesses", w},
          {"infeasibility_witness", profile_json(r.infeasibility_witness)},
          {"iterations", r.iterations},
          {"working_profiles", r.working_profiles},
          {"cuts", r.cuts},
          {"limit_reason", r.limit_reason},
          {"runtime_ms", r.runtime_ms}};
}

int cmd_maximal(const Globals& g, std::size_t n, const std::string& text, bool witnesses, bool known_feasible) {
  auto l = parse_lottery(text);
  Cache cache{g.cache};
  auto path = cache.path("maximal", n, l, witnesses ? "-w" : "");
  json j;
  if (auto hit = cache.load(path)) {
    j = *hit;
    j["cached"] = true;
  } else {
    MaximalityOptions opt;
    opt.limits = g.limits();
    opt.attach_witnesses = witnesses;
    opt.known_feasible = known_feasible;
    auto r = is_maximal(l, n, opt);
    j = maximal_json(l, n, r);
    // Verdicts resting on an unchecked feasibility claim are not cached.
    if (r.verdict != MaxVerdict::Undecided && !known_feasible) cache.store(path, j);
    j["cached"] = false;
  }
  std::string out = j["verdict"].get<std::string>() + "\n";
  if (!j["improver"].is_null()) out += "improver: " + j["improver"].get<std::string>() + "\n";
  for (auto& [k, pr] : j["witnesses"].items()) out += "tight at k=" + k + ": " + pr.get<std::string>() + "\n";
  if (!j["infeasibility_witness"].is_null())
    out += "infeasible at: " + j["infeasibility_witness"].get<std::string>() + "\n";
  if (!j["limit_reason"].get<std::string>().empty()) out += "limit: " + j["limit_reason"].get<std::string>() + "\n";
  print(g, j, out);
  return j["verdict"] == "undecided" ? kUndecided : kOk;
}

int cmd_dual(const Globals& g, const std::string& text) {
  auto l = parse_lottery(text);
  auto d = dual(l);
  auto dec = boundary_decompose(l);
  print(g,
        {{"command", "dual"},
         {"lottery", to_string(l)},
         {"dual", to_string(d)},
         {"uniform_weight", to_string(dec.delta)},
         {"boundary_part", dec.boundary ? json(to_string(*dec.boundary)) : json(nullptr)}},
        to_string(d) + "\n");
  return kOk;
}

int cmd_compose(const Globals& g, const std::string& word, std::size_t n, std::size_t p) {
  auto w = parse_word(word);
  auto l = canonical(w, n, p);
  json j = {{"command", "compose"}, {"word", to_string(w)}, {"n", n}, {"p", p}, {"lottery", to_string(l)}};
  if (w.front() == Op::RD) {
    auto t = support_table(w, n, p);
    json blocks = json::array();
    for (const auto& b : t.blocks) blocks.push_back(b);
    j["support_blocks"] = blocks;
  }
  print(g, j, to_string(l) + "\n");
  return kOk;
}

int cmd_canonical(const Globals& g, std::size_t n, std::size_t p) {
  auto all = enumerate_canonical(n, p);
  json a = json::array();
  std::string out;
  for (const auto& [w, l] : all) {
    a.push_back({{"word", to_string(w)}, {"lottery", to_string(l)}});
    out += to_string(w) + "\t" + to_string(l) + "\n";
  }
  const auto ctx = canonical_context(n, p);
  print(g, {{"command", "canonical"}, {"n", n}, {"p", p}, {"d", ctx.d}, {"count", all.size()}, {"guarantees", a}},
        out);
  return kOk;
}

int cmd_simplex(const Globals& g, const std::string& word, std::size_t n, std::size_t p) {
  auto w = parse_word(word);
  auto v = prefix_simplex(w, n, p);
  json a = json::array();
  std::string out;
  for (const auto& x : v) {
    a.push_back(to_string(x));
    out += to_string(x) + "\n";
  }
  print(g, {{"command", "simplex"}, {"word", to_string(w)}, {"n", n}, {"p", p}, {"vertices", a}}, out);
  return kOk;
}

int cmd_protocol(const Globals& g, const std::string& spec_text, std::size_t n, std::size_t p,
                 const std::string& check, bool all_orders, bool pad_high) {
  auto spec = parse_protocol(spec_text);
  if (pad_high) spec.pad_order = PadOrder::HighestFirst;
  EvalOptions opt;
  opt.all_agent1_orders = all_orders;
  auto r = worst_case_guarantee(spec, n, p, opt);
  json ws = json::object();
  for (const auto& [k, s] : r.worst_scenarios) ws[std::to_string(k)] = s;
  json j = {{"command", "protocol-eval"},
            {"protocol", to_string(spec)},
            {"n", n},
            {"p", p},
            {"decided", r.decided},
            {"achieved", r.achieved ? json(to_string(*r.achieved)) : json(nullptr)},
            {"scenario_count", r.scenario_count},
            {"worst_scenarios", ws},
            {"limit_reason", r.limit_reason}};
  std::string out = r.achieved ? to_string(*r.achieved) + "\n" : "undecided: " + r.limit_reason + "\n";
  int code = r.decided ? kOk : kUndecided;
  if (!check.empty() && r.decided) {
    const bool ok = verify_safe_strategy(spec, parse_lottery(check), n, opt);
    j["secures"] = {{"lottery", check}, {"holds", ok}};
    out += std::string(ok ? "secures " : "does not secure ") + check + "\n";
    if (!ok) code = kFail;
  }
  print(g, j, out);
  return code;
}

int cmd_verify(const Globals& g, const std::string& id, bool list) {
  if (list || id.empty()) {
    json a = json::array();
    std::string out;
    for (const auto& s : list_suites()) {
      a.push_back({{"id", s.id}, {"summary", s.summary}});
      out += s.id + "\t" + s.summary + "\n";
    }
    print(g, {{"command", "verify"}, {"suites", a}}, out);
    return list ? kOk : kUsage;
  }
  SuiteOptions opt;
  opt.limits = g.limits();
  opt.seed = g.seed;
  auto r = run_suite(id, opt);
  json checks = json::array();
  std::string out;
  for (const auto& c : r.checks) {
    checks.push_back({{"claim", c.claim},
                      {"expected", c.expected},
                      {"computed", c.computed},
                      {"status", to_string(c.status)}});
    std::string tag = c.status == CheckStatus::Pass ? "ok  " : c.status == CheckStatus::Fail ? "FAIL" : "??  ";
    out += tag + "  " + c.claim;
    if (c.status != CheckStatus::Pass) out += "  [expected " + c.expected + ", got " + c.computed + "]";
    out += "\n";
  }
  const auto st = r.status();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f s", r.runtime_ms / 1000);
  out += r.id + ": " + to_string(st) + " (" + std::to_string(r.checks.size()) + " checks, " + buf + ")\n";
  print(g,
        {{"command", "verify"},
         {"suite", r.id},
         {"summary", r.summary},
         {"status", to_string(st)},
         {"runtime_ms", r.runtime_ms},
         {"checks", checks}},
        out);
  return st == CheckStatus::Pass ? kOk : st == CheckStatus::Fail ? kFail : kUndecided;
}

// Samples convex combinations of canonical guarantees that no single simplex
// of prefix guarantees contains, and reports any that come out maximal.
int cmd_search(const Globals& g, std::size_t n, std::size_t p, std::size_t samples) {
  const auto ctx = canonical_context(n, p);
  auto all = enumerate_canonical(n, p);
  std::vector<std::set<RankLottery>> simplices;
  std::vector<Word> words;
  for (const auto& [w, l] : all)
    if (w.size() == ctx.d) simplices.emplace_back(std::set<RankLottery>{}), words.push_back(w);
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto v = prefix_simplex(words[i], n, p);
    simplices[i].insert(v.begin(), v.end());
  }
  std::vector<RankLottery> points{uniform(p)};
  for (const auto& [w, l] : all) points.push_back(l);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      bool together = false;
      for (const auto& s : simplices) together |= s.count(points[a]) && s.count(points[b]);
      if (!together) pairs.emplace_back(a, b);
    }
  std::mt19937_64 rng(g.seed);
  std::uniform_int_distribution<int> wd(1, 11);
  MaximalityOptions opt;
  opt.limits = g.limits();
  json found = json::array(), tried = json::array();
  std::string out;
  std::size_t undecided = 0;
  for (std::size_t s = 0; s < samples && !pairs.empty(); ++s) {
    auto [a, b] = pairs[s < pairs.size() ? s : rng() % pairs.size()];
    Rational w = s < pairs.size() ? Rational(1, 2) : Rational(wd(rng), 12);
    w.canonicalize();
    auto l = mix(w, points[a], points[b]);
    opt.known_feasible = true;  // convex combinations of feasible guarantees
    auto r = is_maximal(l, n, opt);
    json e = {{"lottery", to_string(l)},
              {"from", {to_string(points[a]), to_string(points[b])}},
              {"weight", to_string(w)},
              {"verdict", to_string(r.verdict)}};
    tried.push_back(e);
    out += to_string(r.verdict) + "\t" + to_string(l) + "\n";
    if (r.verdict == MaxVerdict::Maximal) found.push_back(e);
    if (r.verdict == MaxVerdict::Undecided) ++undecided;
  }
  out += std::to_string(found.size()) + " maximal combination(s) outside the prefix simplices, " +
         std::to_string(undecided) + " undecided\n";
  print(g, {{"command", "search-combinations"}, {"n", n}, {"p", p}, {"maximal", found}, {"tried", tried}}, out);
  return undecided ? kUndecided : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case guarantees for probabilistic voting: feasibility, maximality, duality, "
               "composition and protocol evaluation"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--jobs", g.jobs, "worker threads (0 = all hardware threads); env WCG_JOBS");
  app.add_option("--cache", g.cache, "directory for cached feasibility/maximality results; env WCG_CACHE");
  app.add_option("--limit-profiles", g.limit_profiles, "stop scans after this many profiles; env WCG_LIMIT_PROFILES");
  app.add_option("--time-limit", g.time_limit, "seconds per search (0 = none); env WCG_TIME_LIMIT");
  app.add_option("--seed", g.seed, "seed for sampled checks");
  app.add_flag("--json", g.json, "emit JSON");

  std::size_t n = 0, p = 0, samples = 20;
  std::string lottery, word, spec, suite, secures;
  bool no_cuts = false, no_library = false, witnesses = false, known_feasible = false, list = false,
       all_orders = false, pad_high = false;

  auto* feas = app.add_subcommand("feasible", "is the guarantee implementable at every profile");
  feas->add_option("--n", n, "agents")->required();
  feas->add_option("--lottery", lottery, "rank lottery, worst rank first, e.g. 0,1/3,1/3,1/3,0,0")->required();
  feas->add_flag("--no-cuts", no_cuts, "skip the necessary-condition cuts");
  feas->add_flag("--no-library", no_library, "skip the library of hard profiles");

  auto* maxc = app.add_subcommand("maximal", "is the guarantee maximal among feasible guarantees");
  maxc->add_option("--n", n, "agents")->required();
  maxc->add_option("--lottery", lottery, "rank lottery")->required();
  maxc->add_flag("--witnesses", witnesses, "attach per-rank tight profiles");
  maxc->add_flag("--known-feasible", known_feasible, "trust that the lottery is feasible (e.g. a protocol secures it)");

  auto* dualc = app.add_subcommand("dual", "dual guarantee");
  dualc->add_option("--lottery", lottery, "rank lottery")->required();

  auto* comp = app.add_subcommand("compose", "canonical guarantee of a word");
  comp->add_option("--word", word, "letters VT/RD, e.g. RD,VT")->required();
  comp->add_option("--n", n, "agents")->required();
  comp->add_option("--p", p, "outcomes")->required();

  auto* canon = app.add_subcommand("canonical", "all canonical guarantees");
  canon->add_option("--n", n, "agents")->required();
  canon->add_option("--p", p, "outcomes")->required();

  auto* simp = app.add_subcommand("simplex", "vertices spanned by a word's prefixes");
  simp->add_option("--word", word, "full-length word")->required();
  simp->add_option("--n", n, "agents")->required();
  simp->add_option("--p", p, "outcomes")->required();

  auto* proto = app.add_subcommand("protocol-eval", "exact worst case of a protocol");
  proto->add_option("--spec", spec, "e.g. \"veto(1); rd(pad); uniform\"")->required();
  proto->add_option("--n", n, "agents")->required();
  proto->add_option("--p", p, "outcomes")->required();
  proto->add_option("--secures", secures, "also check the safe strategy secures this lottery");
  proto->add_flag("--all-orders", all_orders, "try every preference for agent 1");
  proto->add_flag("--pad-high", pad_high, "pad with the highest-numbered outcomes");

  auto* ver = app.add_subcommand("verify", "run a named verification suite");
  ver->add_option("--suite", suite, "suite id");
  ver->add_flag("--list", list, "list suites");

  auto* search = app.add_subcommand("search-combinations",
                                    "look for maximal mixes of canonical guarantees outside the prefix simplices");
  search->add_option("--n", n, "agents")->required();
  search->add_option("--p", p, "outcomes")->required();
  search->add_option("--samples", samples, "number of mixes to test");

  try {
    env_override("WCG_JOBS", g.jobs);
    env_override("WCG_LIMIT_PROFILES", g.limit_profiles);
    env_override("WCG_TIME_LIMIT", g.time_limit);
    if (const char* c = std::getenv("WCG_CACHE"); c && *c) g.cache = c;
    app.parse(argc, argv);  // flags win over the environment
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*feas) return cmd_feasible(g, n, lottery, no_cuts, no_library);
    if (*maxc) return cmd_maximal(g, n, lottery, witnesses, known_feasible);
    if (*dualc) return cmd_dual(g, lottery);
    if (*comp) return cmd_compose(g, word, n, p);
    if (*canon) return cmd_canonical(g, n, p);
    if (*simp) return cmd_simplex(g, word, n, p);
    if (*proto) return cmd_protocol(g, spec, n, p, secures, all_orders, pad_high);
    if (*ver) return cmd_verify(g, suite, list);
    if (*search) return cmd_search(g, n, p, samples);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
