#include <doctest.h>

#include <random>
#include <stdexcept>

#include "gpd/cochain.hpp"

using namespace gpd;

TEST_CASE("trivial cochain passes the 3-cocycle identity") {
  Groupoid g = make_pair_groupoid(3);
  Cochain c(g, 3);
  CocycleVerdict v = check_cocycle3(c);
  CHECK(v.pass);
  CHECK(v.tuples_checked == 3 * 3 * 3 * 3 * 3);  // |G^(4)| = 3^5
}

TEST_CASE("coboundaries are cocycles, exhaustively over G^(4)") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    Groupoid g = make_group_bundle(1, CayleyGroup::cyclic(4));
    Cochain b = random_cochain(g, 2, rng);
    CHECK(check_cocycle3(coboundary(b)).pass);
  }
}

TEST_CASE("d of trivial is trivial and dd = trivial") {
  std::mt19937_64 rng(11);
  Groupoid g = make_pair_groupoid(2);
  Cochain trivial1(g, 1);
  CHECK(coboundary(trivial1).entry_count() == 0);
  Cochain b1 = random_cochain(g, 1, rng);
  CHECK(coboundary(coboundary(b1)).entry_count() == 0);
}

TEST_CASE("a single mutated entry is caught with a witness tuple") {
  std::mt19937_64 rng(3);
  Groupoid g = make_group_bundle(1, CayleyGroup::cyclic(3));
  Cochain c = coboundary(random_cochain(g, 2, rng));
  REQUIRE(check_cocycle3(c).pass);
  // flip one non-unit entry by angle 1/3
  for (const auto& t : composable_tuples(g, 3)) {
    if (g.is_unit(t[0]) || g.is_unit(t[1]) || g.is_unit(t[2])) continue;
    std::span<const ElementId> sp(t.data(), t.size());
    c.set(sp, c.at(sp) * Phase::of(1, 3));
    break;
  }
  CocycleVerdict v = check_cocycle3(c);
  CHECK(!v.pass);
  CHECK(v.witness.has_value());
}

TEST_CASE("normalization is enforced and preserved") {
  Groupoid g = make_pair_groupoid(2);
  Cochain c(g, 3);
  ElementId u = g.units()[0];
  CHECK_THROWS_AS(c.set({u, u, u}, Phase::of(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(Cochain(g, 2).at({0, 0, 0}), std::invalid_argument);  // arity mismatch
  std::mt19937_64 rng(5);
  Cochain db = coboundary(random_cochain(g, 2, rng));
  for (const auto& [t, p] : db.entries())
    for (ElementId e : t) CHECK(!g.is_unit(e));
}

TEST_CASE("standard cyclic generators are group 3-cocycles") {
  for (int k : {2, 3, 4}) {
    auto zk = CayleyGroup::cyclic(k);
    CHECK(cyclic_cocycle3(zk, 1).is_cocycle());
    CHECK(cyclic_cocycle3(zk, 2).is_cocycle());
  }
}

TEST_CASE("inflation produces valid cocycles") {
  auto z4 = CayleyGroup::cyclic(4);
  Groupoid g = make_group_bundle(1, z4);
  auto labels = bundle_labels(1, z4);

  Cochain inf = inflate(cyclic_cocycle3(z4, 1), g, labels);
  CHECK(check_cocycle3(inf).pass);
  CHECK(inf.entry_count() > 0);

  // trivial labelling gives the trivial cocycle
  std::vector<int> trivial_hom(g.size(), 0);
  CHECK(inflate(cyclic_cocycle3(z4, 1), g, trivial_hom).entry_count() == 0);

  // Z/2 generator pulled back to the swap transformation groupoid
  auto z2 = CayleyGroup::cyclic(2);
  Groupoid t = make_transformation_groupoid(z2, {{0, 1}, {1, 0}});
  Cochain inf2 = inflate(cyclic_cocycle3(z2, 1), t, transformation_labels(z2, 2));
  CHECK(check_cocycle3(inf2).pass);

  // labels that break composition are rejected
  std::vector<int> bad = labels;
  bad[1] = 2;
  CHECK_THROWS_AS(inflate(cyclic_cocycle3(z4, 1), g, bad), std::invalid_argument);
}

TEST_CASE("zeta and eta: degenerate cases and direct re-evaluation") {
  // product groupoid: isotropy Z/2 at two related units
  auto z2 = CayleyGroup::cyclic(2);
  Groupoid zb = make_group_bundle(1, z2);
  Groupoid pr = make_pair_groupoid(2);
  Groupoid g = make_product(zb, pr);
  auto labels = product_first_factor_labels(bundle_labels(1, z2), pr.size());

  Cochain trivial(g, 3);
  std::mt19937_64 rng(17);
  Cochain c = multiply(inflate(cyclic_cocycle3(z2, 1), g, labels),
                       coboundary(random_cochain(g, 2, rng)));
  REQUIRE(check_cocycle3(c).pass);

  for (ElementId y : g.units())
    for (ElementId x : g.units()) {
      for (ElementId gamma : g.hom_set(y, x)) {
        ElementId gi = g.inverse(gamma);
        for (ElementId a : g.isotropy(y))
          for (ElementId b : g.isotropy(y)) {
            CHECK(zeta(trivial, gamma, a, b).is_one());
            // direct three-factor product, written out independently
            ElementId ca = g.compose({gi, a, gamma});
            ElementId cb = g.compose({gi, b, gamma});
            Phase direct = c.at({a, b, gamma}).conj() * c.at({a, gamma, cb}) *
                           c.at({gamma, ca, cb}).conj();
            CHECK(zeta(c, gamma, a, b) == direct);
            if (g.is_unit(gamma)) CHECK(zeta(c, gamma, a, b).is_one());
          }
        for (ElementId z : g.units())
          for (ElementId gamma2 : g.hom_set(x, z))
            for (ElementId a : g.isotropy(y)) {
              ElementId ca = g.compose({gi, a, gamma});
              ElementId cca = g.compose({g.inverse(gamma2), ca, gamma2});
              Phase direct = c.at({gamma, ca, gamma2}).conj() *
                             c.at({gamma, gamma2, cca}) * c.at({a, gamma, gamma2}).conj();
              CHECK(eta(c, gamma, gamma2, a) == direct);
            }
      }
    }
  // non-composable arguments are rejected
  ElementId u0 = g.units()[0], u1 = g.units()[1];
  ElementId gamma01 = g.hom_set(u0, u1).front();
  ElementId iso1 = g.isotropy(u1).front();
  CHECK_THROWS_AS(zeta(c, gamma01, iso1, iso1), std::invalid_argument);
}

TEST_CASE("on transitive principal groupoids every cocycle bounds") {
  std::mt19937_64 rng(23);
  for (int m : {2, 3}) {
    Groupoid g = make_pair_groupoid(m);
    Cochain c = coboundary(random_cochain(g, 2, rng));
    Cochain b = trivialize_principal(c);
    CHECK(coboundary(b) == c);
  }
  // not principal -> rejected
  Groupoid z2 = make_group_bundle(1, CayleyGroup::cyclic(2));
  CHECK_THROWS_AS(trivialize_principal(Cochain(z2, 3)), std::invalid_argument);
}

TEST_CASE("random cocycle generator always yields valid normalized cocycles") {
  std::mt19937_64 rng(29);
  auto z3 = CayleyGroup::cyclic(3);
  Groupoid g = make_group_bundle(1, z3);
  auto labels = bundle_labels(1, z3);
  GroupCochain3 seed = cyclic_cocycle3(z3, 1);
  for (int i = 0; i < 10; ++i) {
    Cochain c = random_cocycle3(g, rng, i % 2 ? &seed : nullptr, i % 2 ? &labels : nullptr);
    CHECK(check_cocycle3(c).pass);
  }
}
