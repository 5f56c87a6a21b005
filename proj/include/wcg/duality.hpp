#pragma once

#include <optional>

#include "wcg/lottery.hpp"

namespace wcg {

/// l = delta * UNI + (1 - delta) * boundary, with boundary on the face
/// min = 0. For l = UNI, delta = 1 and boundary is empty.
struct BoundaryDecomposition {
  Rational delta;
  std::optional<RankLottery> boundary;
};

BoundaryDecomposition boundary_decompose(const RankLottery& l);

/// The rank-simplex duality: exchanges VT and RD, fixes UNI, involutive.
RankLottery dual(const RankLottery& l);

/// UNI + alpha (l - UNI). Throws std::out_of_range (message carries the
/// largest admissible alpha) when the point leaves the simplex.
RankLottery radius_point(const RankLottery& l, const Rational& alpha);
/// UNI + alpha (UNI - reflect(l)).
RankLottery anti_radius_point(const RankLottery& l, const Rational& alpha);

/// Largest alpha keeping the radius / anti-radius point a lottery; nullopt
/// when every alpha works (l = UNI).
std::optional<Rational> max_radius_alpha(const RankLottery& l);
std::optional<Rational> max_anti_radius_alpha(const RankLottery& l);

}  // namespace wcg
