#include "wcg/lottery.hpp"

#include <algorithm>
#include <stdexcept>

namespace wcg {

RankLottery::RankLottery(std::vector<Rational> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("lottery needs at least one rank");
  Rational total = 0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    probs_[k].canonicalize();
    if (sgn(probs_[k]) < 0) {
      throw std::invalid_argument("negative probability at rank " + std::to_string(k + 1));
    }
    total += probs_[k];
  }
  if (total != 1) throw std::invalid_argument("probabilities sum to " + total.get_str());
}

std::vector<Rational> RankLottery::cumulative() const {
  std::vector<Rational> out(probs_.size());
  Rational run = 0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    run += probs_[k];
    out[k] = run;
  }
  return out;
}

Rational RankLottery::max_entry() const { return *std::max_element(probs_.begin(), probs_.end()); }
Rational RankLottery::min_entry() const { return *std::min_element(probs_.begin(), probs_.end()); }

Rational partial_sum(const RankLottery& l, std::size_t k1, std::size_t k2) {
  if (k1 < 1 || k1 > k2 || k2 > l.p()) {
    throw std::invalid_argument("partial_sum: ranks " + std::to_string(k1) + ".." +
                                std::to_string(k2) + " outside 1.." + std::to_string(l.p()));
  }
  Rational s = 0;
  for (std::size_t k = k1; k <= k2; ++k) s += l[k];
  return s;
}

RankLottery reflect(const RankLottery& l) {
  std::vector<Rational> v(l.probs().rbegin(), l.probs().rend());
  return RankLottery(std::move(v));
}

bool dominates(const RankLottery& a, const RankLottery& b) {
  if (a.p() != b.p()) throw std::invalid_argument("dominates: dimension mismatch");
  Rational ca = 0, cb = 0;
  for (std::size_t k = 1; k <= a.p(); ++k) {
    ca += a[k];
    cb += b[k];
    if (ca > cb) return false;
  }
  return true;
}

RankLottery uniform(std::size_t p) {
  if (p == 0) throw std::invalid_argument("uniform: p must be positive");
  return RankLottery(std::vector<Rational>(p, Rational(1, p)));
}

RankLottery vt(std::size_t n, std::size_t p) {
  if (n < 1 || n >= p) throw std::invalid_argument("vt: need 1 <= n < p");
  std::vector<Rational> v(p, Rational(0));
  for (std::size_t k = 2; k <= p - n + 1; ++k) v[k - 1] = Rational(1, p - n);
  return RankLottery(std::move(v));
}

RankLottery rd(std::size_t n, std::size_t p) {
  if (n < 1 || n >= p) throw std::invalid_argument("rd: need 1 <= n < p");
  std::vector<Rational> v(p, Rational(0));
  for (std::size_t k = 1; k < n; ++k) v[k - 1] = Rational(1, n);
  v[p - 1] += Rational(1, n);
  return RankLottery(std::move(v));
}

RankLottery mix(const Rational& weight, const RankLottery& a, const RankLottery& b) {
  return convex_combination({weight, Rational(1 - weight)}, {a, b});
}

RankLottery convex_combination(const std::vector<Rational>& weights,
                               const std::vector<RankLottery>& points) {
  if (weights.size() != points.size() || points.empty()) {
    throw std::invalid_argument("convex_combination: size mismatch");
  }
  const std::size_t p = points.front().p();
  std::vector<Rational> v(p, Rational(0));
  Rational total = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].p() != p) throw std::invalid_argument("convex_combination: dimension mismatch");
    if (sgn(weights[i]) < 0) throw std::invalid_argument("convex_combination: negative weight");
    total += weights[i];
    for (std::size_t k = 0; k < p; ++k) v[k] += weights[i] * points[i].probs()[k];
  }
  if (total != 1) throw std::invalid_argument("convex_combination: weights sum to " + total.get_str());
  return RankLottery(std::move(v));
}

bool is_symmetric(const RankLottery& l) {
  const std::size_t p = l.p();
  for (std::size_t k = 1; k <= p / 2; ++k) {
    if (l[k] != l[p + 1 - k]) return false;
  }
  return true;
}

std::vector<RankLottery> m2_vertices(std::size_t p) {
  if (p < 2) throw std::invalid_argument("m2_vertices: p must be at least 2");
  std::vector<RankLottery> out;
  for (std::size_t t = 1; t <= p / 2; ++t) {
    std::vector<Rational> v(p, Rational(0));
    v[t - 1] = Rational(1, 2);
    v[p - t] = Rational(1, 2);
    out.emplace_back(std::move(v));
  }
  if (p % 2 == 1) {
    std::vector<Rational> v(p, Rational(0));
    v[p / 2] = 1;
    out.emplace_back(std::move(v));
  }
  return out;
}

bool feasible_n2(const RankLottery& l) {
  const std::size_t p = l.p();
  Rational low = 0, high = 0;
  for (std::size_t k = 1; k <= p / 2; ++k) {
    low += l[k];
    high += l[p + 1 - k];
    if (low < high) return false;
  }
  return true;
}

RankLottery parse_lottery(std::string_view text) {
  std::vector<Rational> v;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos ? text.size() - start
                                                                               : comma - start);
    try {
      v.push_back(parse_rational(piece));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("lottery entry " + std::to_string(v.size() + 1) +
                                  " (offset " + std::to_string(start) + "): " + e.what());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return RankLottery(std::move(v));
}

std::string to_string(const RankLottery& l) {
  std::string out;
  for (std::size_t k = 0; k < l.p(); ++k) {
    if (k) out += ',';
    out += l.probs()[k].get_str();
  }
  return out;
}

}  // namespace wcg
