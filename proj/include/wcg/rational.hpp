#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace wcg {

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
using Rational = mpq_class;

/// Parses "a", "-a" or "a/b". Throws std::invalid_argument with the byte
/// offset of the first bad character.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline bool is_zero(const Rational& v) { return sgn(v) == 0; }
inline int sign(const Rational& v) { return sgn(v); }

/// Thrown by SmallRational when a result does not fit in 64 bits.
class RationalOverflow : public std::overflow_error {
 public:
  RationalOverflow() : std::overflow_error("int64 rational overflow") {}
};

/// Exact rational with int64 numerator and denominator. Every operation
/// either returns the exact reduced result or throws RationalOverflow; it
/// never rounds. Used as the fast path of the simplex core.
class SmallRational {
 public:
  constexpr SmallRational() = default;
  SmallRational(std::int64_t n) : num_(n), den_(1) {  // NOLINT(implicit)
    if (n == INT64_MIN) throw RationalOverflow();
  }
  SmallRational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend SmallRational operator+(const SmallRational& a, const SmallRational& b);
  friend SmallRational operator-(const SmallRational& a, const SmallRational& b);
  friend SmallRational operator*(const SmallRational& a, const SmallRational& b);
  friend SmallRational operator/(const SmallRational& a, const SmallRational& b);
  SmallRational operator-() const { return from_reduced(-num_, den_); }

  SmallRational& operator+=(const SmallRational& o) { return *this = *this + o; }
  SmallRational& operator-=(const SmallRational& o) { return *this = *this - o; }
  SmallRational& operator*=(const SmallRational& o) { return *this = *this * o; }
  SmallRational& operator/=(const SmallRational& o) { return *this = *this / o; }

  friend bool operator==(const SmallRational& a, const SmallRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const SmallRational& a, const SmallRational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const SmallRational& a, const SmallRational& b) { return b < a; }
  friend bool operator<=(const SmallRational& a, const SmallRational& b) { return !(b < a); }
  friend bool operator>=(const SmallRational& a, const SmallRational& b) { return !(a < b); }

 private:
  static SmallRational from_reduced(std::int64_t n, std::int64_t d) {
    SmallRational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  static SmallRational from_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline bool is_zero(const SmallRational& v) { return v.num() == 0; }
inline int sign(const SmallRational& v) { return (v.num() > 0) - (v.num() < 0); }

/// Converts to the int64 representation; throws RationalOverflow if it does
/// not fit.
SmallRational to_small(const Rational& value);
Rational to_rational(const SmallRational& value);

}  // namespace wcg
