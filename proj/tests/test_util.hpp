#pragma once

#include <random>
#include <vector>

#include "wcg/lottery.hpp"

namespace testutil {

// Random lottery with entries k_i / total, k_i drawn from [0, spread].
inline wcg::RankLottery random_lottery(std::size_t p, std::mt19937_64& rng, int spread = 6,
                                       double zero_chance = 0.0) {
  std::uniform_int_distribution<int> d(0, spread);
  std::bernoulli_distribution z(zero_chance);
  for (;;) {
    std::vector<long> w(p);
    long total = 0;
    for (auto& x : w) {
      x = z(rng) ? 0 : d(rng);
      total += x;
    }
    if (total == 0) continue;
    std::vector<wcg::Rational> v;
    for (long x : w) v.emplace_back(x, total);
    for (auto& x : v) x.canonicalize();
    return wcg::RankLottery(std::move(v));
  }
}

}  // namespace testutil
