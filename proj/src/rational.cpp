#include "tcdc/rational.hpp"

#include <cstdlib>

namespace tcdc {

namespace {

using uint128 = unsigned __int128;

uint128 uabs(int128 v) { return v < 0 ? uint128(0) - uint128(v) : uint128(v); }

uint128 gcd128(uint128 a, uint128 b) {
  while (b != 0) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int128 checked_mul(int128 a, int128 b) {
  int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw OverflowError("rational: product exceeds 128 bits");
  return out;
}

int128 checked_add(int128 a, int128 b) {
  int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw OverflowError("rational: sum exceeds 128 bits");
  return out;
}

}  // namespace

std::string int128_str(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  uint128 u = uabs(v);
  char buf[48];
  int i = 48;
  while (u != 0) {
    buf[--i] = char('0' + int(u % 10));
    u /= 10;
  }
  if (neg) buf[--i] = '-';
  return std::string(buf + i, buf + 48);
}

Rational Rational::normalized(int128 n, int128 d) {
  if (d == 0) throw Error("rational: zero denominator");
  if (n == 0) return Rational(0, 1, 0);
  if (d < 0) {
    n = -n;
    d = -d;
  }
  uint128 g = gcd128(uabs(n), uabs(d));
  if (g > 1) {
    n /= int128(g);
    d /= int128(g);
  }
  return Rational(n, d, 0);
}

Rational::Rational(long long num, long long den) { *this = normalized(num, den); }

Rational Rational::of(int128 num, int128 den) { return normalized(num, den); }

Rational Rational::operator-() const { return Rational(-num_, den_, 0); }

Rational Rational::operator+(const Rational& o) const {
  // a/b + c/d with b,d > 0; reduce via g = gcd(b,d) before cross-multiplying.
  int128 g = int128(gcd128(uint128(den_), uint128(o.den_)));
  int128 bl = den_ / g, dl = o.den_ / g;
  int128 n = checked_add(checked_mul(num_, dl), checked_mul(o.num_, bl));
  int128 d = checked_mul(checked_mul(bl, g), dl);
  return normalized(n, d);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  if (num_ == 0 || o.num_ == 0) return Rational();
  int128 g1 = int128(gcd128(uabs(num_), uint128(o.den_)));
  int128 g2 = int128(gcd128(uabs(o.num_), uint128(den_)));
  int128 n = checked_mul(num_ / g1, o.num_ / g2);
  int128 d = checked_mul(den_ / g2, o.den_ / g1);
  return Rational(n, d, 0);  // already coprime
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw Error("rational: division by zero");
  return *this * normalized(o.den_, o.num_);  // restores den > 0
}

bool Rational::operator<(const Rational& o) const {
  return checked_mul(num_, o.den_) < checked_mul(o.num_, den_);
}

std::string Rational::str() const {
  if (den_ == 1) return int128_str(num_);
  return int128_str(num_) + "/" + int128_str(den_);
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

}  // namespace tcdc
