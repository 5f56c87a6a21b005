#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wcg/rational.hpp"

namespace wcg {

/// Probability vector over ranks 1..p, rank 1 being the worst. Immutable
/// once built; the constructor rejects negative entries or a sum other than 1.
class RankLottery {
 public:
  explicit RankLottery(std::vector<Rational> probs);

  std::size_t p() const { return probs_.size(); }
  /// 1-based rank access.
  const Rational& operator[](std::size_t rank) const { return probs_[rank - 1]; }
  const std::vector<Rational>& probs() const { return probs_; }

  /// Cumulative sums from the worst rank: result[k-1] = [lambda]_1^k.
  std::vector<Rational> cumulative() const;
  Rational max_entry() const;
  Rational min_entry() const;

  friend bool operator==(const RankLottery& a, const RankLottery& b) {
    return a.probs_ == b.probs_;
  }
  friend bool operator!=(const RankLottery& a, const RankLottery& b) { return !(a == b); }
  friend bool operator<(const RankLottery& a, const RankLottery& b) { return a.probs_ < b.probs_; }

 private:
  std::vector<Rational> probs_;
};

/// Sum of ranks k1..k2 inclusive (1-based). Throws std::invalid_argument.
Rational partial_sum(const RankLottery& l, std::size_t k1, std::size_t k2);
RankLottery reflect(const RankLottery& l);
/// True iff every lower cumulative sum of a is <= that of b.
bool dominates(const RankLottery& a, const RankLottery& b);

RankLottery uniform(std::size_t p);
RankLottery vt(std::size_t n, std::size_t p);
RankLottery rd(std::size_t n, std::size_t p);

/// weight * a + (1 - weight) * b, for weight in [0,1].
RankLottery mix(const Rational& weight, const RankLottery& a, const RankLottery& b);
/// sum_i w_i * l_i; weights must be nonnegative and sum to 1.
RankLottery convex_combination(const std::vector<Rational>& weights,
                               const std::vector<RankLottery>& points);

bool is_symmetric(const RankLottery& l);
/// The extreme points of the two-agent maximal set: the half/half lotteries
/// on ranks t and p+1-t, plus the middle point mass for odd p.
std::vector<RankLottery> m2_vertices(std::size_t p);
/// Two-agent feasibility: [l]_1^k >= [l]_{p+1-k}^p for k <= p/2.
bool feasible_n2(const RankLottery& l);

/// "0,1/3,1/3,1/3,0,0", ranks listed worst first.
RankLottery parse_lottery(std::string_view text);
std::string to_string(const RankLottery& l);

}  // namespace wcg
