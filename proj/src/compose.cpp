#include "wcg/compose.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "wcg/duality.hpp"

namespace wcg {

Word parse_word(std::string_view text) {
  Word out;
  std::size_t i = 0;
  while (i <= text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    const std::size_t start = i;
    std::string tok;
    while (i < text.size() && text[i] != ',') {
      if (text[i] != ' ') tok += static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
      ++i;
    }
    if (tok == "VT") {
      out.push_back(Op::VT);
    } else if (tok == "RD") {
      out.push_back(Op::RD);
    } else {
      throw std::invalid_argument("bad word letter at offset " + std::to_string(start) +
                                  " (expected VT or RD)");
    }
    ++i;  // skip ','
  }
  return out;
}

std::string to_string(const Word& word) {
  std::string s;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) s += ',';
    s += word[i] == Op::VT ? "VT" : "RD";
  }
  return s;
}

Word swap_letters(const Word& word) {
  Word out;
  for (Op o : word) out.push_back(o == Op::VT ? Op::RD : Op::VT);
  return out;
}

CanonicalContext canonical_context(std::size_t n, std::size_t p) {
  if (n < 2 || p <= n) throw std::invalid_argument("canonical guarantees need 2 <= n < p");
  CanonicalContext c;
  c.n = n;
  c.p = p;
  c.d = (p - 1) / n;
  c.q = p - c.d * n;
  return c;
}

RankLottery vt_compose(const RankLottery& l, std::size_t n) {
  if (n < 2) throw std::invalid_argument("composition needs n >= 2");
  std::vector<Rational> v(l.p() + n, Rational(0));
  std::copy(l.probs().begin(), l.probs().end(), v.begin() + 1);
  return RankLottery(std::move(v));
}

RankLottery rd_compose_direct(const RankLottery& l, std::size_t n) {
  if (n < 2) throw std::invalid_argument("composition needs n >= 2");
  if (sgn(l.min_entry()) != 0) throw std::invalid_argument("direct RD composition needs a boundary lottery");
  const Rational top = l.max_entry();
  const Rational denom = Rational(n) * top + 1;
  Rational fill = top / denom;
  std::vector<Rational> v;
  for (std::size_t i = 0; i + 1 < n; ++i) v.push_back(fill);
  for (const auto& x : l.probs()) {
    Rational y = x / denom;
    y.canonicalize();
    v.push_back(y);
  }
  v.push_back(fill);
  return RankLottery(std::move(v));
}

RankLottery rd_compose_via_dual(const RankLottery& l, std::size_t n) {
  return dual(vt_compose(dual(l), n));
}

RankLottery rd_compose(const RankLottery& l, std::size_t n) {
  if (sgn(l.min_entry()) == 0) return rd_compose_direct(l, n);
  return rd_compose_via_dual(l, n);
}

RankLottery compose(Op op, const RankLottery& l, std::size_t n) {
  return op == Op::VT ? vt_compose(l, n) : rd_compose(l, n);
}

RankLottery canonical(const Word& word, std::size_t n, std::size_t p) {
  const auto ctx = canonical_context(n, p);
  const std::size_t h = word.size();
  if (h < 1 || h > ctx.d) {
    throw std::invalid_argument("word length must be between 1 and d = " + std::to_string(ctx.d));
  }
  RankLottery l = uniform((ctx.d - h) * n + ctx.q);
  for (std::size_t t = h; t-- > 0;) l = compose(word[t], l, n);
  return l;
}

std::vector<std::pair<Word, RankLottery>> enumerate_canonical(std::size_t n, std::size_t p) {
  const auto ctx = canonical_context(n, p);
  std::vector<std::pair<Word, RankLottery>> out;
  for (std::size_t h = 1; h <= ctx.d; ++h) {
    for (std::size_t bits = 0; bits < (std::size_t(1) << h); ++bits) {
      Word w;
      for (std::size_t t = 0; t < h; ++t) w.push_back(bits >> (h - 1 - t) & 1 ? Op::RD : Op::VT);
      out.emplace_back(w, canonical(w, n, p));
    }
  }
  return out;
}

bool affinely_independent(const std::vector<RankLottery>& points) {
  if (points.size() <= 1) return true;
  const std::size_t p = points[0].p();
  std::vector<std::vector<Rational>> rows;
  for (std::size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> r(p);
    for (std::size_t k = 0; k < p; ++k) r[k] = points[i].probs()[k] - points[0].probs()[k];
    rows.push_back(std::move(r));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < p && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && sgn(rows[piv][col]) == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (sgn(rows[r][col]) == 0) continue;
      Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t k = col; k < p; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank == rows.size();
}

std::vector<RankLottery> prefix_simplex(const Word& word, std::size_t n, std::size_t p) {
  const auto ctx = canonical_context(n, p);
  if (word.size() != ctx.d) throw std::invalid_argument("simplex needs a word of length d");
  std::vector<RankLottery> out{uniform(p)};
  for (std::size_t h = 1; h <= ctx.d; ++h) out.push_back(canonical(Word(word.begin(), word.begin() + h), n, p));
  if (!affinely_independent(out)) throw std::logic_error("simplex vertices are affinely dependent");
  return out;
}

std::vector<std::size_t> support(const RankLottery& l) {
  std::vector<std::size_t> s;
  for (std::size_t k = 1; k <= l.p(); ++k)
    if (sgn(l[k]) > 0) s.push_back(k);
  return s;
}

bool uniform_on_support(const RankLottery& l) {
  auto s = support(l);
  return std::all_of(s.begin(), s.end(), [&](std::size_t k) { return l[k] == l[s.front()]; });
}

SupportTable support_table(const Word& word, std::size_t n, std::size_t p) {
  SupportTable t;
  t.ctx = canonical_context(n, p);
  t.word = word;
  const std::size_t d = t.ctx.d;
  if (word.empty() || word.size() > d) throw std::invalid_argument("word length must be in 1..d");
  if (word.front() != Op::RD) throw std::invalid_argument("support table is defined for RD-headed words");

  // Block j is carved from the current inner rank range [lo, hi].
  std::size_t lo = 1, hi = p;
  for (std::size_t j = 0; j < d; ++j) {
    const Op op = j < word.size() ? word[j] : Op::RD;
    std::vector<std::size_t> b;
    if (op == Op::RD) {
      for (std::size_t r = lo; r + 1 < lo + n; ++r) b.push_back(r);
      b.push_back(hi);
      lo += n - 1;
      hi -= 1;
    } else {
      b.push_back(lo);
      for (std::size_t r = hi + 2 - n; r <= hi; ++r) b.push_back(r);
      lo += 1;
      hi -= n - 1;
    }
    std::sort(b.begin(), b.end());
    t.blocks.push_back(std::move(b));
  }
  std::vector<std::size_t> last;
  for (std::size_t r = lo; r <= hi; ++r) last.push_back(r);
  t.blocks.push_back(std::move(last));

  for (Op o : word) t.flags.push_back(o == Op::RD ? 1 : 0);
  for (std::size_t k = 1; k <= word.size(); ++k) {
    std::size_t theta = 0;
    for (std::size_t j = 2; j <= k; ++j) theta += n * t.flags[j - 1];
    if (!t.flags[k - 1]) theta += p - k * n;
    t.theta.push_back(theta);
    std::vector<std::size_t> s;
    for (std::size_t j = 1; j <= k; ++j)
      if (t.flags[j - 1]) s.insert(s.end(), t.blocks[j - 1].begin(), t.blocks[j - 1].end());
    if (!t.flags[k - 1])
      for (std::size_t j = k + 1; j <= d + 1; ++j) s.insert(s.end(), t.blocks[j - 1].begin(), t.blocks[j - 1].end());
    std::sort(s.begin(), s.end());
    t.supports.push_back(std::move(s));
  }

  for (std::size_t k = 1; k <= word.size(); ++k) {
    auto l = canonical(Word(word.begin(), word.begin() + k), n, p);
    const auto& s = t.supports[k - 1];
    if (support(l) != s || !uniform_on_support(l) || s.size() != t.theta[k - 1] + n ||
        l[s.front()] != Rational(1, s.size())) {
      throw std::logic_error("support table disagrees with the composed lottery for prefix " +
                             to_string(Word(word.begin(), word.begin() + k)));
    }
  }
  return t;
}

}  // namespace wcg
