#pragma once

#include <cstdint>
#include <string>

#include "tcdc/errors.hpp"

namespace tcdc {

using int128 = __int128;

std::string int128_str(int128 v);

// Exact rational on 128-bit integers. Always stored reduced with den > 0.
// Every operation is overflow-checked and throws OverflowError rather than
// wrapping; load accounting and the optimality certificates depend on that.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit on purpose
  Rational(long long num, long long den);

  static Rational of(int128 num, int128 den);

  int128 num() const { return num_; }
  int128 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  // "21/256", or just "21" for integers.
  std::string str() const;
  double to_double() const;

 private:
  Rational(int128 n, int128 d, int) : num_(n), den_(d) {}  // pre-normalized
  static Rational normalized(int128 n, int128 d);

  int128 num_;
  int128 den_;
};

}  // namespace tcdc
