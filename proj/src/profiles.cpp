#include "wcg/profiles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wcg {

Preference make_preference(std::vector<Outcome> order) {
  if (order.size() > 32) throw std::invalid_argument("at most 32 outcomes supported");
  std::vector<bool> seen(order.size(), false);
  for (Outcome o : order) {
    if (o >= order.size() || seen[o]) throw std::invalid_argument("preference is not a permutation");
    seen[o] = true;
  }
  return Preference{std::move(order)};
}

Profile make_profile(std::vector<Preference> prefs) {
  if (prefs.empty()) throw std::invalid_argument("profile needs at least one agent");
  for (const auto& pr : prefs) {
    if (pr.p() != prefs.front().p()) throw std::invalid_argument("agents disagree on p");
    make_preference(pr.order);
  }
  return Profile{std::move(prefs), false};
}

OutcomeSet k_tail(const Preference& pref, std::size_t k) {
  if (k < 1 || k > pref.p()) throw std::invalid_argument("k_tail: k out of range");
  OutcomeSet s = 0;
  for (std::size_t r = 0; r < k; ++r) s |= OutcomeSet(1) << pref.order[r];
  return s;
}

std::vector<Outcome> k_tail_list(const Preference& pref, std::size_t k) {
  if (k < 1 || k > pref.p()) throw std::invalid_argument("k_tail: k out of range");
  std::vector<Outcome> v(pref.order.begin(), pref.order.begin() + static_cast<long>(k));
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Rational> rank_values(const std::vector<Rational>& values, const Preference& pref) {
  if (values.size() != pref.p()) throw std::invalid_argument("rank_rearrange: dimension mismatch");
  std::vector<Rational> v(pref.p());
  for (std::size_t r = 0; r < pref.p(); ++r) v[r] = values[pref.order[r]];
  return v;
}

RankLottery rank_rearrange(const OutcomeLottery& l, const Preference& pref) {
  return RankLottery(rank_values(l.mass, pref));
}

namespace {

std::vector<Outcome> inverse_of(const std::vector<Outcome>& order) {
  std::vector<Outcome> inv(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) inv[order[r]] = static_cast<Outcome>(r);
  return inv;
}

}  // namespace

CanonicalImage canonicalize_with_map(const Profile& profile) {
  const std::size_t n = profile.n();
  CanonicalImage best;
  bool have = false;
  std::vector<std::vector<Outcome>> cand(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto sigma = inverse_of(profile.prefs[j].order);  // outcome -> new id
    for (std::size_t i = 0; i < n; ++i) {
      cand[i].resize(profile.p());
      for (std::size_t r = 0; r < profile.p(); ++r) cand[i][r] = sigma[profile.prefs[i].order[r]];
    }
    std::sort(cand.begin(), cand.end());
    bool better = !have;
    if (have) {
      for (std::size_t i = 0; i < n; ++i) {
        if (cand[i] != best.profile.prefs[i].order) {
          better = cand[i] < best.profile.prefs[i].order;
          break;
        }
      }
    }
    if (better) {
      best.profile.prefs.clear();
      for (const auto& c : cand) best.profile.prefs.push_back(Preference{c});
      best.relabel = sigma;
      have = true;
    }
  }
  best.profile.canonical = true;
  return best;
}

Profile canonicalize(const Profile& profile) { return canonicalize_with_map(profile).profile; }

std::uint32_t permutation_rank(const Outcome* perm, std::size_t p) {
  std::uint32_t rank = 0;
  std::uint32_t used = 0;
  for (std::size_t r = 0; r < p; ++r) {
    const std::uint32_t below = (std::uint32_t(1) << perm[r]) - 1;
    const auto smaller = static_cast<std::uint32_t>(std::popcount(below & ~used));
    rank = rank * static_cast<std::uint32_t>(p - r) + smaller;
    used |= std::uint32_t(1) << perm[r];
  }
  return rank;
}

PermTable::PermTable(std::size_t p) : p_(p) {
  if (p < 1 || p > kMaxP) {
    throw std::invalid_argument("permutation table supports 1 <= p <= " + std::to_string(kMaxP));
  }
  count_ = 1;
  for (std::size_t i = 2; i <= p; ++i) count_ *= i;
  perms_.resize(count_ * p);
  inverse_.resize(count_);
  tails_.assign(count_ * (p + 1), 0);
  std::vector<Outcome> cur(p);
  std::iota(cur.begin(), cur.end(), Outcome(0));
  std::vector<Outcome> inv(p);
  for (std::size_t idx = 0; idx < count_; ++idx) {
    std::copy(cur.begin(), cur.end(), perms_.begin() + static_cast<long>(idx * p));
    OutcomeSet s = 0;
    for (std::size_t k = 1; k <= p; ++k) {
      s |= OutcomeSet(1) << cur[k - 1];
      tails_[idx * (p + 1) + k] = s;
    }
    for (std::size_t r = 0; r < p; ++r) inv[cur[r]] = static_cast<Outcome>(r);
    inverse_[idx] = permutation_rank(inv.data(), p);
    std::next_permutation(cur.begin(), cur.end());
  }
}

std::uint32_t PermTable::compose(std::uint32_t a, std::uint32_t b) const {
  Outcome buf[kMaxP];
  const Outcome* pa = perm(a);
  const Outcome* pb = perm(b);
  for (std::size_t r = 0; r < p_; ++r) buf[r] = pa[pb[r]];
  return permutation_rank(buf, p_);
}

ProfileSpace::ProfileSpace(std::size_t n, std::size_t p) : n_(n), p_(p), table_(p) {
  if (n < 1) throw std::invalid_argument("profile space needs n >= 1");
  if (n > 16) throw std::invalid_argument("profile space supports n <= 16");
}

bool ProfileSpace::is_canonical_tuple(const std::uint32_t* t) const {
  std::uint32_t buf[16];
  for (std::size_t j = 1; j < n_; ++j) {
    if (t[j] == t[j - 1]) continue;  // same pivot order, same relabeling
    const std::uint32_t inv = table_.inverse(t[j]);
    for (std::size_t i = 0; i < n_; ++i) buf[i] = i == j ? 0 : table_.compose(inv, t[i]);
    std::sort(buf, buf + n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (buf[i] != t[i]) {
        if (buf[i] < t[i]) return false;
        break;
      }
    }
  }
  return true;
}

bool ProfileSpace::for_each_in_chunk(
    std::size_t chunk, const std::function<bool(const std::uint32_t*)>& visit) const {
  std::uint32_t t[16] = {0};
  if (n_ == 1) return visit(t);
  t[1] = static_cast<std::uint32_t>(chunk);
  const auto total = static_cast<std::uint32_t>(table_.size());
  // Odometer over t[2..n-1], nondecreasing.
  for (std::size_t i = 2; i < n_; ++i) t[i] = t[1];
  for (;;) {
    if (is_canonical_tuple(t) && !visit(t)) return false;
    std::size_t pos = n_ - 1;
    while (pos >= 2 && t[pos] + 1 >= total) --pos;
    if (pos < 2) return true;
    ++t[pos];
    for (std::size_t i = pos + 1; i < n_; ++i) t[i] = t[pos];
  }
}

bool ProfileSpace::for_each(const std::function<bool(const std::uint32_t*)>& visit) const {
  for (std::size_t c = 0; c < chunk_count(); ++c) {
    if (!for_each_in_chunk(c, visit)) return false;
  }
  return true;
}

Profile ProfileSpace::to_profile(const std::uint32_t* tuple) const {
  Profile pr;
  for (std::size_t i = 0; i < n_; ++i) {
    const Outcome* o = table_.perm(tuple[i]);
    pr.prefs.push_back(Preference{std::vector<Outcome>(o, o + p_)});
  }
  pr.canonical = true;
  return pr;
}

std::vector<Profile> enumerate_profiles(std::size_t n, std::size_t p) {
  ProfileSpace space(n, p);
  std::vector<Profile> out;
  space.for_each([&](const std::uint32_t* t) {
    out.push_back(space.to_profile(t));
    return true;
  });
  return out;
}

std::uint64_t count_canonical_profiles(std::size_t n, std::size_t p) {
  ProfileSpace space(n, p);
  std::uint64_t count = 0;
  space.for_each([&](const std::uint32_t*) {
    ++count;
    return true;
  });
  return count;
}

Profile cyclic_pad_profile(const Profile& inner) {
  const std::size_t n = inner.n(), p = inner.p();
  Profile out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Outcome> o;
    o.push_back(static_cast<Outcome>(p + i));
    o.insert(o.end(), inner.prefs[i].order.begin(), inner.prefs[i].order.end());
    for (std::size_t s = 1; s < n; ++s) o.push_back(static_cast<Outcome>(p + (i + s) % n));
    out.prefs.push_back(make_preference(std::move(o)));
  }
  return out;
}

Profile rd_pad_profile(const Profile& inner) {
  const std::size_t n = inner.n(), p = inner.p();
  Profile out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Outcome> o;
    for (std::size_t s = 0; s + 1 < n; ++s) o.push_back(static_cast<Outcome>(p + (i + s) % n));
    o.insert(o.end(), inner.prefs[i].order.begin(), inner.prefs[i].order.end());
    o.push_back(static_cast<Outcome>(p + (i + n - 1) % n));
    out.prefs.push_back(make_preference(std::move(o)));
  }
  return out;
}

Profile cyclic_profile(std::size_t n, std::size_t p) {
  Profile out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Outcome> o(p);
    for (std::size_t r = 0; r < p; ++r) o[r] = static_cast<Outcome>((r + i) % p);
    out.prefs.push_back(make_preference(std::move(o)));
  }
  return out;
}

Profile identical_profile(std::size_t n, std::size_t p) {
  Profile out;
  std::vector<Outcome> o(p);
  std::iota(o.begin(), o.end(), Outcome(0));
  for (std::size_t i = 0; i < n; ++i) out.prefs.push_back(Preference{o});
  return out;
}

Profile parse_profile(std::string_view text) {
  std::vector<Preference> prefs;
  std::vector<Outcome> cur;
  std::size_t pos = 0;
  auto flush = [&](std::size_t at) {
    if (cur.empty()) throw std::invalid_argument("empty agent at offset " + std::to_string(at));
    for (auto& o : cur) {
      if (o < 1 || o > cur.size()) {
        throw std::invalid_argument("outcome id out of range near offset " + std::to_string(at));
      }
      --o;
    }
    try {
      prefs.push_back(make_preference(cur));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string(e.what()) + " near offset " + std::to_string(at));
    }
    cur.clear();
  };
  while (pos < text.size()) {
    const char ch = text[pos];
    if (ch == ' ' || ch == '\t' || ch == ',') {
      ++pos;
    } else if (ch == '/' || ch == '\n' || ch == ';') {
      flush(pos);
      ++pos;
    } else if (ch >= '0' && ch <= '9') {
      unsigned v = 0;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        v = v * 10 + static_cast<unsigned>(text[pos] - '0');
        if (v > 255) throw std::invalid_argument("outcome id too large at offset " + std::to_string(pos));
        ++pos;
      }
      cur.push_back(static_cast<Outcome>(v));
    } else {
      throw std::invalid_argument("unexpected character at offset " + std::to_string(pos));
    }
  }
  flush(pos);
  return make_profile(std::move(prefs));
}

std::string to_string(const Profile& profile) {
  std::ostringstream os;
  for (std::size_t i = 0; i < profile.n(); ++i) {
    if (i) os << " / ";
    for (std::size_t r = 0; r < profile.p(); ++r) {
      if (r) os << ' ';
      os << static_cast<int>(profile.prefs[i].order[r]) + 1;
    }
  }
  return os.str();
}

}  // namespace wcg
