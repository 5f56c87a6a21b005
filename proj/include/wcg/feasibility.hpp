#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wcg/lottery.hpp"
#include "wcg/profiles.hpp"
#include "wcg/ratlp.hpp"

namespace wcg {

enum class Verdict { Feasible, Infeasible, Undecided };
std::string to_string(Verdict v);

/// Resource limits. Zero means unlimited. Hitting a limit yields Undecided.
struct SearchLimits {
  std::uint64_t max_profiles = 0;
  double max_seconds = 0;
  unsigned jobs = 1;
};

struct FeasibilityOptions {
  SearchLimits limits;
  bool use_cuts = true;
  bool use_library = true;
};

struct FeasibilityReport {
  Verdict verdict = Verdict::Undecided;
  std::optional<Profile> witness_profile;
  std::optional<FarkasCertificate> witness_certificate;
  std::uint64_t profiles_checked = 0;
  std::vector<std::string> cuts_used;       // families of cuts evaluated
  std::optional<std::string> violated_cut;  // set when a cut proved infeasibility
  std::string limit_reason;                 // set when Undecided
  double runtime_ms = 0;
};

/// The implementation LP at one profile: variables are outcome masses,
/// sum = 1, and every agent's k-tail mass is at most [l]_1^k (k < p).
LinearProgram implementation_lp(const RankLottery& l, const Profile& profile);

struct Implementation {
  std::optional<OutcomeLottery> lottery;
  std::optional<FarkasCertificate> certificate;  // when no lottery exists
};

Implementation implement_at_full(const RankLottery& l, const Profile& profile);
std::optional<OutcomeLottery> implement_at(const RankLottery& l, const Profile& profile);

/// Re-solves nothing: checks the stored certificate against a freshly built LP.
bool verify_infeasibility(const RankLottery& l, const FeasibilityReport& report);

FeasibilityReport is_feasible(const RankLottery& l, std::size_t n,
                              const FeasibilityOptions& options = {});

struct BalancedFamily {
  std::size_t p = 0;
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> sets;  // elements of [p], 1-based
  std::vector<Rational> weights;
};

/// Family of k-subsets of [p] with at most n members, when the size
/// conditions of the construction hold; nullopt otherwise.
std::optional<BalancedFamily> balanced_family(std::size_t p, std::size_t k, std::size_t n);
bool is_balanced(const BalancedFamily& family);

/// Whether the k/p lower bounds on cumulative sums are known valid at (n,p).
bool k_over_p_cuts_apply(std::size_t n, std::size_t p);

struct CutViolation {
  std::string description;
  std::optional<Profile> witness;  // a profile at which l cannot be implemented
};

/// Evaluates every applicable necessary condition; nullopt means all pass.
std::optional<CutViolation> necessary_cuts(const RankLottery& l, std::size_t n);

/// Profile whose first agents have the family's sets as k-tails.
Profile balanced_family_profile(const BalancedFamily& family, std::size_t n);

struct CardinalViolation {
  std::vector<std::vector<Rational>> utilities;  // n rows of p, column sums zero
  Rational value;                                // sum_i l . sort(u_i) > 0
};

/// Samples integer utilities in [-range, range], projects them to zero column
/// sums, and returns the first sample with sum_i l . sort(u_i) > 0.
std::optional<CardinalViolation> cardinal_falsifier(const RankLottery& l, std::size_t n,
                                                    std::size_t samples, std::uint64_t seed,
                                                    int range = 10);
/// sum_i l . sort_ascending(u_i).
Rational cardinal_value(const RankLottery& l, const std::vector<std::vector<Rational>>& utilities);

/// Profiles that tend to be extremal: identical, cyclic, opposed pairs,
/// balanced-family tails, and padded images of smaller profiles. Deduplicated
/// up to symmetry and returned in canonical form.
std::vector<Profile> hard_profiles(std::size_t n, std::size_t p);

namespace detail {

/// Single-threaded fast checker for one lottery: tries a pool of recent
/// solutions before solving the small implementation LP exactly.
class FeasibilityProbe {
 public:
  FeasibilityProbe(const RankLottery& l, std::size_t n);
  ~FeasibilityProbe();
  FeasibilityProbe(const FeasibilityProbe&) = delete;
  FeasibilityProbe& operator=(const FeasibilityProbe&) = delete;

  /// orders[i] points at agent i's order (p outcomes, worst first).
  bool feasible(const Outcome* const* orders);
  bool feasible(const Profile& profile);

  std::uint64_t lp_calls() const;
  std::uint64_t pool_hits() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace detail

}  // namespace wcg
