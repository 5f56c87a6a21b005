#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wcg/feasibility.hpp"

namespace wcg {

/// A valid inequality for every feasible guarantee: sum_k weights[k-1] * [mu]_1^k >= bound,
/// k = 1..p-1.
struct GuaranteeCut {
  std::vector<Rational> weights;
  Rational bound;
  std::string origin;
};

/// Turns an infeasibility certificate of mu at a profile into a cut that mu
/// violates and every guarantee feasible at that profile satisfies.
GuaranteeCut cut_from_certificate(std::size_t n, std::size_t p, const FarkasCertificate& cert,
                                  std::string origin);
Rational cut_lhs(const GuaranteeCut& cut, const RankLottery& mu);

enum class MaxVerdict { Maximal, Dominated, Undecided, Infeasible };
std::string to_string(MaxVerdict v);

struct MaximalityOptions {
  SearchLimits limits;
  std::size_t max_iterations = 5000;
  std::size_t library_cuts_per_round = 16;
  bool attach_witnesses = false;
  std::uint64_t witness_search_profiles = 20000;  // exhaustive fallback budget per k
  // Skip the feasibility check of the input, e.g. when a protocol already
  // secures it. A wrong claim can turn Infeasible into a bogus verdict.
  bool known_feasible = false;
};

struct ImproveResult {
  MaxVerdict verdict = MaxVerdict::Undecided;
  std::optional<RankLottery> improver;
  std::size_t iterations = 0;
  std::size_t working_profiles = 0;  // profiles that produced cuts
  std::size_t cuts = 0;
  std::optional<Profile> infeasibility_witness;
  std::string limit_reason;
};

/// Cutting-plane search for a feasible mu that dominates l and differs from
/// it. The master LP works on the cumulative sums of mu and maximizes the
/// total slack against l; cuts come from profiles where the current mu fails.
/// Requires l feasible (reports Infeasible otherwise). The time limit covers
/// the whole call.
ImproveResult improve(const RankLottery& l, std::size_t n, const MaximalityOptions& options = {});

struct MaximalityReport {
  MaxVerdict verdict = MaxVerdict::Undecided;
  std::optional<RankLottery> improver;
  std::map<std::size_t, Profile> witnesses;  // rank k -> profile where the bound at k is tight
  std::size_t iterations = 0;
  std::size_t working_profiles = 0;
  std::size_t cuts = 0;
  std::optional<Profile> infeasibility_witness;
  std::string limit_reason;
  double runtime_ms = 0;
};

MaximalityReport is_maximal(const RankLottery& l, std::size_t n, const MaximalityOptions& options = {});

/// Smallest possible max_i [l*_i]_1^k over lotteries implementing l at the
/// profile; nullopt when l is not implementable there.
std::optional<Rational> min_tail_load(const RankLottery& l, const Profile& profile, std::size_t k);

/// A profile at which every implementing lottery loads some agent's k-tail
/// with exactly [l]_1^k. Tries the profile library first, then enumerates
/// at most max_profiles canonical profiles.
std::optional<Profile> tight_profile(const RankLottery& l, std::size_t n, std::size_t k,
                                      std::uint64_t max_profiles = 20000);

struct PolarCertificate {
  std::vector<Rational> z;
};

/// Zero sum, strictly increasing, orthogonal to l, and z . mu <= 0 for every
/// mu in the (already verified) test set.
bool check_polar_certificate(const PolarCertificate& cert, const RankLottery& l,
                             const std::vector<RankLottery>& test_set);

}  // namespace wcg
