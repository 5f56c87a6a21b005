#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wcg/lottery.hpp"

namespace wcg {

enum class Op { VT, RD };
using Word = std::vector<Op>;

/// "RD,VT,VT" (case-insensitive, spaces ignored). Throws std::invalid_argument
/// with the offset of the bad token.
Word parse_word(std::string_view text);
std::string to_string(const Word& word);
/// Exchanges VT and RD letter by letter.
Word swap_letters(const Word& word);

/// d = floor((p-1)/n), p = d n + q with 1 <= q <= n.
struct CanonicalContext {
  std::size_t n = 0, p = 0, d = 0, q = 0;
};
CanonicalContext canonical_context(std::size_t n, std::size_t p);

/// (0, l, 0^{n-1}) over p + n ranks.
RankLottery vt_compose(const RankLottery& l, std::size_t n);
/// Boundary input: n-1 ranks of l+/(n l+ + 1), then l/(n l+ + 1), then one
/// more l+/(n l+ + 1). Any other input goes through the dual of vt_compose.
RankLottery rd_compose(const RankLottery& l, std::size_t n);
/// The two forms separately, for cross-checks. The direct form requires a
/// boundary lottery.
RankLottery rd_compose_direct(const RankLottery& l, std::size_t n);
RankLottery rd_compose_via_dual(const RankLottery& l, std::size_t n);
RankLottery compose(Op op, const RankLottery& l, std::size_t n);

/// Right fold of the word. The innermost letter acts on (d-h+1)n+q outcomes
/// and is itself a composition over UNI((d-h)n+q).
RankLottery canonical(const Word& word, std::size_t n, std::size_t p);

/// Every word of length 1..d with its lottery, shortest words first.
std::vector<std::pair<Word, RankLottery>> enumerate_canonical(std::size_t n, std::size_t p);

/// UNI(p) followed by the canonical lotteries of the d prefixes of a length-d
/// word. Throws std::logic_error if they are affinely dependent.
std::vector<RankLottery> prefix_simplex(const Word& word, std::size_t n, std::size_t p);
bool affinely_independent(const std::vector<RankLottery>& points);

/// True iff l is constant on its support.
bool uniform_on_support(const RankLottery& l);
std::vector<std::size_t> support(const RankLottery& l);  // 1-based ranks

/// Rank blocks and support bookkeeping for an RD-headed word. Words shorter
/// than d are padded with RD for the block layout only; the flags and
/// supports cover the given letters.
struct SupportTable {
  CanonicalContext ctx;
  Word word;
  std::vector<std::vector<std::size_t>> blocks;    // d+1 blocks of 1-based ranks
  std::vector<int> flags;                          // flags[j-1] = 1 iff letter j is RD
  std::vector<std::size_t> theta;                  // theta[k-1] for prefix length k
  std::vector<std::vector<std::size_t>> supports;  // predicted support of prefix k
};

/// Builds the table and checks every prefix lottery against it; throws
/// std::logic_error on a mismatch.
SupportTable support_table(const Word& word, std::size_t n, std::size_t p);

}  // namespace wcg
