#include "wcg/duality.hpp"

#include <stdexcept>

namespace wcg {

namespace {

// UNI + alpha * (dir - UNI) for a direction point dir, unchecked.
std::vector<Rational> along(const std::vector<Rational>& dir, const Rational& alpha) {
  const Rational u(1, dir.size());
  std::vector<Rational> out(dir.size());
  for (std::size_t k = 0; k < dir.size(); ++k) {
    out[k] = u + alpha * (dir[k] - u);
    out[k].canonicalize();
  }
  return out;
}

RankLottery checked(std::vector<Rational> v, const std::optional<Rational>& max_alpha) {
  for (const auto& x : v) {
    if (sgn(x) < 0) {
      throw std::out_of_range("point leaves the simplex; largest admissible alpha is " +
                              (max_alpha ? to_string(*max_alpha) : std::string("unbounded")));
    }
  }
  return RankLottery(std::move(v));
}

RankLottery dual_of_boundary(const RankLottery& l) {
  const std::size_t p = l.p();
  const Rational top = l.max_entry();
  Rational scale = 1 / (Rational(p) * top - 1);
  std::vector<Rational> out(p);
  for (std::size_t k = 1; k <= p; ++k) {
    out[k - 1] = scale * (top - l[p + 1 - k]);
    out[k - 1].canonicalize();
  }
  return RankLottery(std::move(out));
}

}  // namespace

BoundaryDecomposition boundary_decompose(const RankLottery& l) {
  const std::size_t p = l.p();
  const Rational u(1, p);
  const Rational lo = l.min_entry();
  if (lo == u) return {Rational(1), std::nullopt};
  if (sgn(lo) == 0) return {Rational(0), l};
  Rational alpha = u / (u - lo);
  Rational delta = 1 - 1 / alpha;
  auto b = along(l.probs(), alpha);
  return {delta, RankLottery(std::move(b))};
}

RankLottery dual(const RankLottery& l) {
  auto dec = boundary_decompose(l);
  if (!dec.boundary) return uniform(l.p());
  auto bd = dual_of_boundary(*dec.boundary);
  if (sgn(dec.delta) == 0) return bd;
  return mix(dec.delta, uniform(l.p()), bd);
}

std::optional<Rational> max_radius_alpha(const RankLottery& l) {
  const Rational u(1, l.p());
  const Rational lo = l.min_entry();
  if (lo == u) return std::nullopt;
  return Rational(u / (u - lo));
}

std::optional<Rational> max_anti_radius_alpha(const RankLottery& l) {
  const Rational u(1, l.p());
  const Rational hi = l.max_entry();
  if (hi == u) return std::nullopt;
  return Rational(u / (hi - u));
}

RankLottery radius_point(const RankLottery& l, const Rational& alpha) {
  if (sgn(alpha) < 0) throw std::invalid_argument("alpha must be nonnegative");
  return checked(along(l.probs(), alpha), max_radius_alpha(l));
}

RankLottery anti_radius_point(const RankLottery& l, const Rational& alpha) {
  if (sgn(alpha) < 0) throw std::invalid_argument("alpha must be nonnegative");
  // UNI + alpha (UNI - r) = UNI + (-alpha)(r - UNI)
  return checked(along(reflect(l).probs(), -alpha), max_anti_radius_alpha(l));
}

}  // namespace wcg
