#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wcg/lottery.hpp"
#include "wcg/rational.hpp"

namespace wcg {

/// Outcome ids are 0-based internally and 1-based in text.
using Outcome = std::uint8_t;
using OutcomeSet = std::uint32_t;  // bitmask over outcome ids

/// A strict order, listed worst to best.
struct Preference {
  std::vector<Outcome> order;

  std::size_t p() const { return order.size(); }
  friend bool operator==(const Preference& a, const Preference& b) { return a.order == b.order; }
  friend bool operator<(const Preference& a, const Preference& b) { return a.order < b.order; }
};

struct Profile {
  std::vector<Preference> prefs;
  bool canonical = false;

  std::size_t n() const { return prefs.size(); }
  std::size_t p() const { return prefs.empty() ? 0 : prefs.front().p(); }
  friend bool operator==(const Profile& a, const Profile& b) { return a.prefs == b.prefs; }
};

/// Probability mass per outcome id.
struct OutcomeLottery {
  std::vector<Rational> mass;
};

Preference make_preference(std::vector<Outcome> order);  // validates the bijection
Profile make_profile(std::vector<Preference> prefs);     // validates a common p

/// The k worst outcomes of pref, as a bitmask.
OutcomeSet k_tail(const Preference& pref, std::size_t k);
std::vector<Outcome> k_tail_list(const Preference& pref, std::size_t k);

/// result[k] = mass of the outcome pref ranks at k.
RankLottery rank_rearrange(const OutcomeLottery& l, const Preference& pref);
/// Same rearrangement for an arbitrary per-outcome vector (utilities).
std::vector<Rational> rank_values(const std::vector<Rational>& values, const Preference& pref);

struct CanonicalImage {
  Profile profile;
  std::vector<Outcome> relabel;  // relabel[old id] = new id
};

/// Orbit representative under agent permutations and outcome relabelings.
Profile canonicalize(const Profile& profile);
CanonicalImage canonicalize_with_map(const Profile& profile);

/// Lexicographic rank of a permutation of 0..p-1.
std::uint32_t permutation_rank(const Outcome* perm, std::size_t p);

/// All permutations of 0..p-1 in lexicographic order plus per-permutation
/// tails and inverses. Shared by enumeration and the feasibility scan.
class PermTable {
 public:
  explicit PermTable(std::size_t p);

  std::size_t p() const { return p_; }
  std::size_t size() const { return count_; }
  const Outcome* perm(std::uint32_t idx) const { return &perms_[idx * p_]; }
  std::uint32_t inverse(std::uint32_t idx) const { return inverse_[idx]; }
  /// Bitmask of the k worst outcomes (1 <= k <= p).
  OutcomeSet tail(std::uint32_t idx, std::size_t k) const { return tails_[idx * (p_ + 1) + k]; }
  /// Index of a o b, i.e. (a o b)[r] = a[b[r]].
  std::uint32_t compose(std::uint32_t a, std::uint32_t b) const;

  static constexpr std::size_t kMaxP = 9;

 private:
  std::size_t p_;
  std::size_t count_;
  std::vector<Outcome> perms_;
  std::vector<std::uint32_t> inverse_;
  std::vector<OutcomeSet> tails_;
};

/// Canonical profiles as tuples of permutation indices. Agent 1 is always the
/// identity (index 0) and the tuple is sorted. Work is split into chunks by
/// the index of agent 2, so disjoint chunks may be scanned in parallel.
class ProfileSpace {
 public:
  ProfileSpace(std::size_t n, std::size_t p);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  const PermTable& perms() const { return table_; }
  std::size_t chunk_count() const { return n_ == 1 ? 1 : table_.size(); }

  /// Calls visit(tuple) for every canonical tuple in the chunk, in increasing
  /// lexicographic order; stops early when visit returns false. Returns
  /// false iff stopped early.
  bool for_each_in_chunk(std::size_t chunk,
                         const std::function<bool(const std::uint32_t*)>& visit) const;
  /// Same over every chunk, sequentially.
  bool for_each(const std::function<bool(const std::uint32_t*)>& visit) const;

  bool is_canonical_tuple(const std::uint32_t* tuple) const;
  Profile to_profile(const std::uint32_t* tuple) const;

 private:
  std::size_t n_, p_;
  PermTable table_;
};

/// Materializes every canonical profile. Only for small (n, p).
std::vector<Profile> enumerate_profiles(std::size_t n, std::size_t p);
/// Number of canonical profiles, via the streaming enumerator.
std::uint64_t count_canonical_profiles(std::size_t n, std::size_t p);

/// Adds n outcomes a_1..a_n (ids p..p+n-1): agent i ranks a_i worst, the
/// inner order next, and a_{i+1}, ..., a_{i+n-1} (cyclically) on top.
Profile cyclic_pad_profile(const Profile& inner);
/// Adds n outcomes: agent i ranks a_i, ..., a_{i+n-2} at the bottom, the
/// inner order next, and a_{i+n-1} (cyclically) on top.
Profile rd_pad_profile(const Profile& inner);
/// n agents over p outcomes, agent i's order is the identity shifted by i.
Profile cyclic_profile(std::size_t n, std::size_t p);
Profile identical_profile(std::size_t n, std::size_t p);

/// "1 2 3 / 2 3 1 / 3 1 2": one agent per '/' group, worst to best, 1-based.
Profile parse_profile(std::string_view text);
std::string to_string(const Profile& profile);

}  // namespace wcg
