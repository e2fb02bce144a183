#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gpd {

// Exact rational on int64 with overflow-checked products. The lemma suites
// keep denominators at lcm's of the inputs (bounded by construction), so 64
// bits are ample; the guard turns a silent wrap into a hard error.
class Rat {
 public:
  Rat() = default;
  Rat(std::int64_t n) : num_(n) {}  // NOLINT: implicit integer promotion is intended
  Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  Rat operator-() const { return Rat(-num_, den_); }

  Rat operator+(const Rat& o) const {
    __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    return from_checked(n, d);
  }
  Rat operator-(const Rat& o) const { return *this + (-o); }
  Rat operator*(const Rat& o) const {
    __int128 n = (__int128)num_ * o.num_;
    __int128 d = (__int128)den_ * o.den_;
    return from_checked(n, d);
  }
  Rat operator/(const Rat& o) const {
    if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
    __int128 n = (__int128)num_ * o.den_;
    __int128 d = (__int128)den_ * o.num_;
    return from_checked(n, d);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const {
    return (__int128)num_ * o.den_ < (__int128)o.num_ * den_;
  }
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  double to_double() const { return double(num_) / double(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static Rat from_checked(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rat: 64-bit overflow");
    Rat r;
    r.num_ = (std::int64_t)n;
    r.den_ = (std::int64_t)d;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  void normalize() { *this = from_checked(num_, den_); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace gpd
