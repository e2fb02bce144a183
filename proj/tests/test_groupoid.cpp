#include <doctest.h>

#include <array>
#include <stdexcept>

#include "gpd/groupoid.hpp"

using namespace gpd;

namespace {
// rebuild a groupoid with one composition entry redirected
Groupoid corrupt_composition(const Groupoid& g, ElementId a, ElementId b, ElementId wrong) {
  std::vector<ElementId> src, rng, inv;
  std::vector<std::array<ElementId, 3>> comp;
  for (int e = 0; e < g.size(); ++e) {
    src.push_back(g.source(e));
    rng.push_back(g.range(e));
    inv.push_back(g.inverse(e));
  }
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y)
      if (g.composable(x, y))
        comp.push_back({x, y, (x == a && y == b) ? wrong : g.compose(x, y)});
  return Groupoid(src, rng, inv, comp);
}
}  // namespace

TEST_CASE("pair groupoid axioms hold by construction") {
  Groupoid g = make_pair_groupoid(3);
  CHECK(g.size() == 9);
  CHECK(g.units().size() == 3);
  CHECK(validate(g).ok());
  CHECK(g.transitive());
  for (int a = 0; a < g.size(); ++a) {
    CHECK(g.inverse(g.inverse(a)) == a);
    CHECK(g.source(g.inverse(a)) == g.range(a));
  }
}

TEST_CASE("a corrupted composition entry is reported with the offending pair") {
  Groupoid g = make_pair_groupoid(3);
  // (0,1)*(1,2) = (0,2): arrows 1*3+... ids: (i,j) -> i*3+j: 1 = (0,1), 5 = (1,2), 2 = (0,2)
  Groupoid bad = corrupt_composition(g, 1, 5, 0);
  ValidationReport rep = validate(bad);
  CHECK(!rep.ok());
  bool names_pair = false;
  for (const auto& v : rep.violations)
    if (v.where.size() >= 2 && v.where[0] == 1 && v.where[1] == 5) names_pair = true;
  CHECK(names_pair);
}

TEST_CASE("group bundle over two points validates and splits into orbits") {
  Groupoid g = make_group_bundle(2, CayleyGroup::cyclic(2));
  CHECK(g.size() == 4);
  CHECK(g.units().size() == 2);
  CHECK(validate(g).ok());
  CHECK(!g.transitive());
  CHECK(g.orbits().size() == 2);
}

TEST_CASE("composable tuple counts match brute force") {
  Groupoid p2 = make_pair_groupoid(2);
  CHECK(composable_tuples(p2, 2).size() == 8);  // 2^3

  Groupoid z2 = make_group_bundle(1, CayleyGroup::cyclic(2));
  CHECK(composable_tuples(z2, 3).size() == 8);  // 2^3 words

  // n=1 with x = y = u enumerates the isotropy group
  Groupoid g = make_group_bundle(1, CayleyGroup::cyclic(4));
  TupleConstraints tc;
  tc.range_unit = g.units()[0];
  tc.source_unit = g.units()[0];
  auto iso = composable_tuples(g, 1, tc);
  CHECK(iso.size() == g.isotropy(g.units()[0]).size());

  // lexicographic order
  auto all = composable_tuples(p2, 2);
  for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1] < all[i]);

  // recursive count |G^{x,(n)}| = sum over t1 of |G^{s(t1),(n-1)}|
  for (ElementId x : p2.units()) {
    TupleConstraints c1;
    c1.range_unit = x;
    size_t direct = composable_tuples(p2, 3, c1).size();
    size_t rec = 0;
    for (ElementId t1 : p2.range_fiber(x)) {
      TupleConstraints c2;
      c2.range_unit = p2.source(t1);
      rec += composable_tuples(p2, 2, c2).size();
    }
    CHECK(direct == rec);
  }
}

TEST_CASE("semidirect presentation: pair groupoid") {
  Groupoid g = make_pair_groupoid(3);
  SemidirectPresentation sd = semidirect(g);
  for (ElementId x : g.units()) CHECK(g.isotropy(x).size() == 1);  // H trivial
  for (ElementId y : g.units())
    for (ElementId x : g.units()) {
      ElementId s = sd.sigma(y, x);
      CHECK(g.range(s) == y);
      CHECK(g.source(s) == x);
      // in the pair groupoid the section is the arrow (y,x) itself
      CHECK(s == g.hom_set(y, x).front());
    }
}

TEST_CASE("semidirect presentation: bundle has diagonal relation only") {
  Groupoid g = make_group_bundle(2, CayleyGroup::cyclic(3));
  SemidirectPresentation sd = semidirect(g);
  for (ElementId y : g.units())
    for (ElementId x : g.units()) {
      if (y == x) {
        CHECK(sd.sigma(x, x) == x);
      } else {
        CHECK(!sd.defined(y, x));
      }
    }
}

TEST_CASE("semidirect presentation: swap action, involutive and multiplicative") {
  auto z2 = CayleyGroup::cyclic(2);
  Groupoid g = make_transformation_groupoid(z2, {{0, 1}, {1, 0}});
  CHECK(validate(g).ok());
  SemidirectPresentation sd = semidirect(g);
  for (ElementId x : g.units()) CHECK(g.isotropy(x).size() == 1);
  for (ElementId y : g.units())
    for (ElementId x : g.units()) {
      CHECK(sd.sigma(y, x) == g.inverse(sd.sigma(x, y)));
      for (ElementId z : g.units())
        CHECK(g.compose(sd.sigma(z, y), sd.sigma(y, x)) == sd.sigma(z, x));
    }
  // unique factorization through the section
  for (int a = 0; a < g.size(); ++a) {
    ElementId h = sd.isotropy_part(a);
    CHECK(g.source(h) == g.range(h));
    CHECK(g.compose(h, sd.sigma(g.range(a), g.source(a))) == a);
  }
}

TEST_CASE("generators") {
  CHECK(make_pair_groupoid(3).size() == 9);

  Groupoid z4 = make_group_bundle(1, CayleyGroup::cyclic(4));
  CHECK(z4.size() == 4);
  CHECK(z4.units().size() == 1);
  CHECK(validate(z4).ok());

  // Z/4 acting on itself by translation: free, 16 arrows
  auto c4 = CayleyGroup::cyclic(4);
  std::vector<std::vector<int>> act(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int x = 0; x < 4; ++x) act[a][x] = (a + x) % 4;
  Groupoid t = make_transformation_groupoid(c4, act);
  CHECK(t.size() == 16);
  CHECK(validate(t).ok());
  for (ElementId x : t.units()) CHECK(t.isotropy(x).size() == 1);

  // invalid action table rejected with the offending pair
  std::vector<std::vector<int>> bad = act;
  bad[1][0] = 2;  // breaks act[1][act[1][0]] chain somewhere
  CHECK_THROWS_AS(make_transformation_groupoid(c4, bad), std::invalid_argument);

  Groupoid prod = make_product(make_group_bundle(1, CayleyGroup::cyclic(2)),
                               make_pair_groupoid(2));
  CHECK(prod.size() == 8);
  CHECK(validate(prod).ok());
  CHECK(prod.transitive());
  for (ElementId x : prod.units()) CHECK(prod.isotropy(x).size() == 2);
}
