#include <doctest.h>

#include "gpd/phase.hpp"
#include "gpd/rational.hpp"

using gpd::Phase;
using gpd::Rat;

TEST_CASE("rational arithmetic is exact and normalized") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-3, -6) == Rat(1, 2));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 3) * Rat(3, 5) == Rat(1, 5));
  CHECK(Rat(7, 3) - Rat(1, 3) == Rat(2));
  CHECK(Rat(1, 2) / Rat(1, 4) == Rat(2));
  CHECK(Rat(-1, 2).abs() == Rat(1, 2));
  CHECK(Rat(1, 3) < Rat(1, 2));
  CHECK_THROWS(Rat(1, 0));
  CHECK_THROWS(Rat(1, 2) / Rat(0));
}

TEST_CASE("phases are rational angles mod 1") {
  Phase a = Phase::of(1, 3);
  Phase b = Phase::of(2, 3);
  CHECK((a * b).is_one());
  CHECK(a.conj() == b);
  CHECK(Phase::of(5, 3) == Phase::of(2, 3));
  CHECK(Phase::of(-1, 4) == Phase::of(3, 4));
  CHECK(a.pow(3).is_one());
  CHECK(Phase::of(1, 2).value().real() == doctest::Approx(-1.0).epsilon(1e-15));
  // products of roots of unity decided exactly
  Phase c = Phase::of(1, 8);
  Phase acc = Phase::one();
  for (int i = 0; i < 8; ++i) acc *= c;
  CHECK(acc.is_one());
}
