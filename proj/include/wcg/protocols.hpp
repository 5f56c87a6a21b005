#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcg/lottery.hpp"
#include "wcg/profiles.hpp"

namespace wcg {

/// One protocol stage. Reports are sets of `count` outcomes per agent.
///   Veto:    every agent names `count` survivors; all named ones are removed.
///   Avoid:   agents name their `count` worst survivors; the first `size`-set
///            meeting every named set is removed.
///   Dictator: agents name `count` top survivors. Naive: each agent picks
///            uniformly among its own names with weight 1/n. Padded: the
///            union is filled up to n*count survivors in pad order (unless
///            everyone names the same set when the stage is final) and one is
///            drawn uniformly. With weight w < 1 the draw happens with
///            probability w, otherwise play continues on the outcomes outside
///            the drawn-from set.
///   Cover:   agents name their `count` top survivors; the first `size`-set
///            meeting every named set is chosen and drawn uniformly.
///   Uniform: a uniform draw among survivors.
struct Stage {
  enum class Kind { Veto, Avoid, Dictator, Cover, Uniform };
  Kind kind = Kind::Uniform;
  std::size_t count = 0;
  std::size_t size = 0;
  bool pad = false;
  Rational weight = 1;

  bool terminal() const;
  bool needs_reports() const { return kind != Kind::Uniform; }
};

enum class PadOrder { LowestFirst, HighestFirst };

struct ProtocolSpec {
  std::vector<Stage> stages;
  PadOrder pad_order = PadOrder::LowestFirst;
};

/// "veto(1); rd(pad); uniform", "rd", "rd(pad, 2)", "rd(pad, 1, 3/4)",
/// "cover(2, 2)", "avoid(2, 2); uniform". A trailing `uniform` after a final
/// stage is accepted as an unreachable fallback. Errors carry the offset.
ProtocolSpec parse_protocol(std::string_view text);
std::string to_string(const ProtocolSpec& spec);

/// Throws std::invalid_argument if the stage list cannot be played with
/// (n, p): no final stage, or removals leave no outcome.
void validate(const ProtocolSpec& spec, std::size_t n, std::size_t p);

/// reports[s][i] = agent i's report at the s-th stage that takes reports.
using Reports = std::vector<std::vector<std::vector<Outcome>>>;

/// Exact outcome distribution. Throws std::invalid_argument on an illegal
/// report and std::runtime_error if a required cover does not exist.
OutcomeLottery run(const ProtocolSpec& spec, std::size_t n, std::size_t p, const Reports& reports);
/// The reports an agent with this preference makes when playing safe:
/// worst survivors for Veto/Avoid, top survivors otherwise.
std::vector<Outcome> safe_report(const Stage& stage, const Preference& pref,
                                 const std::vector<bool>& survivors);

struct EvalOptions {
  std::uint64_t max_scenarios = 20'000'000;
  bool all_agent1_orders = false;  // every preference for agent 1, not just the identity
};

struct EvalReport {
  bool decided = false;
  std::optional<RankLottery> achieved;
  std::uint64_t scenario_count = 0;
  std::map<std::size_t, std::string> worst_scenarios;  // k -> reports reaching the max at k
  std::string limit_reason;
};

/// Agent 1 plays safe, the others report anything legal at every stage.
/// achieved has, at each k, the largest [rearranged outcome]_1^k over all
/// scenarios.
EvalReport worst_case_guarantee(const ProtocolSpec& spec, std::size_t n, std::size_t p,
                                const EvalOptions& options = {});

/// True iff in every scenario agent 1's rank distribution dominates l.
bool verify_safe_strategy(const ProtocolSpec& spec, const RankLottery& l, std::size_t n,
                          const EvalOptions& options = {});

enum class CoverMode {
  HalfCover,   // p = 2n-1: n-1 outcomes meeting everyone's top two, drawn uniformly
  PairTop,     // p = 2n-1: two outcomes meeting everyone's top n-1, drawn uniformly
  PairBottom,  // p = 2n-1: remove two outcomes meeting everyone's worst n-1, then uniform
};

struct CoverProtocol {
  ProtocolSpec spec;
  std::size_t size = 0;   // cover size
  std::size_t depth = 0;  // tail depth each agent reports
  bool top = true;        // covers top sets (else worst sets)
};

CoverProtocol cover_protocol(std::size_t n, std::size_t p, CoverMode mode);

/// First canonical profile at which no `size`-set meets every agent's top
/// (or worst) `depth` outcomes; nullopt means a cover exists everywhere.
std::optional<Profile> cover_counterexample(std::size_t n, std::size_t p, std::size_t size,
                                            std::size_t depth, bool top);

}  // namespace wcg
