#include "wcg/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>

namespace wcg {

namespace {

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// gcd of a 128-bit value with a positive 64-bit one.
std::int64_t gcd_wide(__int128 a, std::int64_t b) {
  __int128 r = a % b;
  return gcd64(static_cast<std::int64_t>(r), b);
}

bool fits(__int128 v) { return v <= kMax && v >= -kMax; }

std::size_t parse_digits(std::string_view text, std::size_t pos, mpz_class& out) {
  const std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == start) {
    throw std::invalid_argument("expected digit at offset " + std::to_string(pos) + " in \"" +
                                std::string(text) + "\"");
  }
  out.set_str(std::string(text.substr(start, pos - start)), 10);
  return pos;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  mpz_class num, den = 1;
  pos = parse_digits(text, pos, num);
  if (pos < text.size() && text[pos] == '/') {
    const std::size_t slash = pos;
    pos = parse_digits(text, pos + 1, den);
    if (den == 0) {
      throw std::invalid_argument("zero denominator at offset " + std::to_string(slash + 1) +
                                  " in \"" + std::string(text) + "\"");
    }
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) {
    throw std::invalid_argument("unexpected character at offset " + std::to_string(pos) +
                                " in \"" + std::string(text) + "\"");
  }
  Rational r(negative ? mpz_class(-num) : num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

SmallRational::SmallRational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::invalid_argument("zero denominator");
  *this = from_wide(n, d);
}

SmallRational SmallRational::from_wide(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return from_reduced(0, 1);
  // Reduce in 128 bits before the range check.
  __int128 a = n < 0 ? -n : n, b = d;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  n /= a;
  d /= a;
  if (!fits(n) || !fits(d)) throw RationalOverflow();
  return from_reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

SmallRational operator+(const SmallRational& a, const SmallRational& b) {
  if (a.den_ == 1 && b.den_ == 1) {
    __int128 s = static_cast<__int128>(a.num_) + b.num_;
    if (!fits(s)) throw RationalOverflow();
    return SmallRational::from_reduced(static_cast<std::int64_t>(s), 1);
  }
  const std::int64_t d1 = std::gcd(a.den_, b.den_);
  if (d1 == 1) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    if (!fits(n) || !fits(d)) throw RationalOverflow();
    return SmallRational::from_reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
  }
  __int128 t = static_cast<__int128>(a.num_) * (b.den_ / d1) +
               static_cast<__int128>(b.num_) * (a.den_ / d1);
  if (t == 0) return SmallRational::from_reduced(0, 1);
  const std::int64_t d2 = gcd_wide(t, d1);
  __int128 n = t / d2;
  __int128 d = static_cast<__int128>(a.den_ / d1) * (b.den_ / d2);
  if (!fits(n) || !fits(d)) throw RationalOverflow();
  return SmallRational::from_reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

SmallRational operator-(const SmallRational& a, const SmallRational& b) { return a + (-b); }

SmallRational operator*(const SmallRational& a, const SmallRational& b) {
  if (a.num_ == 0 || b.num_ == 0) return SmallRational::from_reduced(0, 1);
  const std::int64_t g1 = gcd64(a.num_, b.den_);
  const std::int64_t g2 = gcd64(b.num_, a.den_);
  __int128 n = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
  __int128 d = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
  if (!fits(n) || !fits(d)) throw RationalOverflow();
  return SmallRational::from_reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

SmallRational operator/(const SmallRational& a, const SmallRational& b) {
  if (b.num_ == 0) throw std::domain_error("division by zero");
  SmallRational inv = b.num_ < 0 ? SmallRational::from_reduced(-b.den_, -b.num_)
                                 : SmallRational::from_reduced(b.den_, b.num_);
  return a * inv;
}

SmallRational to_small(const Rational& value) {
  const mpz_class& n = value.get_num();
  const mpz_class& d = value.get_den();
  if (!n.fits_slong_p() || !d.fits_slong_p()) throw RationalOverflow();
  const long nn = n.get_si();
  if (nn == std::numeric_limits<long>::min()) throw RationalOverflow();
  return SmallRational(static_cast<std::int64_t>(nn), static_cast<std::int64_t>(d.get_si()));
}

Rational to_rational(const SmallRational& value) {
  Rational r(static_cast<long>(value.num()), static_cast<long>(value.den()));
  r.canonicalize();
  return r;
}

}  // namespace wcg
