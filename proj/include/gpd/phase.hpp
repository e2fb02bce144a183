#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

#include "gpd/rational.hpp"

namespace gpd {

// A point of the circle group stored as an exact rational angle in [0,1);
// the complex value is exp(2*pi*i*angle). Multiplication is angle addition
// mod 1, so identities between roots of unity are decided exactly.
class Phase {
 public:
  Phase() = default;

  static Phase one() { return Phase(); }

  // exp(2*pi*i * num/den), reduced mod 1
  static Phase of(std::int64_t num, std::int64_t den) {
    Phase p;
    p.angle_ = reduce(Rat(num, den));
    return p;
  }
  static Phase of(const Rat& angle) {
    Phase p;
    p.angle_ = reduce(angle);
    return p;
  }

  const Rat& angle() const { return angle_; }
  bool is_one() const { return angle_.is_zero(); }

  Phase operator*(const Phase& o) const { return of(angle_ + o.angle_); }
  Phase& operator*=(const Phase& o) { return *this = *this * o; }
  Phase conj() const { return of(-angle_); }
  Phase pow(std::int64_t e) const { return of(angle_ * Rat(e)); }

  bool operator==(const Phase& o) const { return angle_ == o.angle_; }
  bool operator!=(const Phase& o) const { return !(*this == o); }

  std::complex<double> value() const {
    return std::polar(1.0, 2.0 * std::numbers::pi * angle_.to_double());
  }

  std::string str() const { return angle_.str(); }

 private:
  static Rat reduce(Rat a) {
    std::int64_t q = a.num() / a.den();
    a = a - Rat(q);
    if (a < Rat(0)) a = a + Rat(1);
    return a;
  }

  Rat angle_;  // in [0,1)
};

}  // namespace gpd
