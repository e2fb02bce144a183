#include <doctest.h>

#include <random>

#include "gpd/measure.hpp"

using namespace gpd;

namespace {

MeasureFamily<Rat> rational_measure(const Groupoid& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> numer(1, 6);
  std::vector<Rat> w(g.size(), Rat(0));
  for (ElementId x : g.units()) {
    Rat total(0);
    std::vector<Rat> raw;
    for (size_t i = 0; i < g.range_fiber(x).size(); ++i) {
      raw.push_back(Rat(numer(rng)));
      total += raw.back();
    }
    size_t i = 0;
    for (ElementId a : g.range_fiber(x)) w[a] = raw[i++] / total;
  }
  return MeasureFamily<Rat>(g, std::move(w));
}

}  // namespace

TEST_CASE("unit indicator convolves to the measure itself") {
  std::mt19937_64 rng(1);
  Groupoid g = make_pair_groupoid(3);
  MeasureFamily<Rat> mu = rational_measure(g, rng);
  ElementId x = g.units()[1];
  FiberFunction<Rat> ind;
  ind.x = x;
  for (ElementId a : g.range_fiber(x)) ind.v.push_back(a == x ? Rat(1) : Rat(0));
  FiberFunction<Rat> out = convolve(g, ind, mu);
  FiberFunction<Rat> expect = mu.fiber(x);
  for (size_t i = 0; i < out.v.size(); ++i) CHECK(out.v[i] == expect.v[i]);
}

TEST_CASE("l1 norm is preserved for nonnegative f, contracted in general") {
  std::mt19937_64 rng(2);
  Groupoid g = make_group_bundle(1, CayleyGroup::cyclic(4));
  for (int rep = 0; rep < 50; ++rep) {
    MeasureFamily<Rat> mu = rational_measure(g, rng);
    ElementId x = g.units()[0];
    FiberFunction<Rat> f;
    f.x = x;
    std::uniform_int_distribution<int> numer(-6, 6);
    for (size_t i = 0; i < g.range_fiber(x).size(); ++i) f.v.push_back(Rat(numer(rng), 3));
    CHECK(l1_norm(convolve(g, f, mu)) <= l1_norm(f));
    for (Rat& v : f.v) v = v.abs();
    CHECK(l1_norm(convolve(g, f, mu)) == l1_norm(f));
  }
}

TEST_CASE("fiber convolution on a group matches plain group convolution") {
  std::mt19937_64 rng(3);
  auto z6 = CayleyGroup::cyclic(6);
  Groupoid g = make_group_bundle(1, z6);
  MeasureFamily<Rat> mu = rational_measure(g, rng);
  ElementId x = g.units()[0];
  FiberFunction<Rat> f;
  f.x = x;
  std::uniform_int_distribution<int> numer(-6, 6);
  for (size_t i = 0; i < g.range_fiber(x).size(); ++i) f.v.push_back(Rat(numer(rng), 2));
  FiberFunction<Rat> got = convolve(g, f, mu);
  // independent oracle: (f*mu)(a) = sum_b f(a b^-1) mu(b) in the Cayley table
  const auto& fiber = g.range_fiber(x);
  for (size_t ia = 0; ia < fiber.size(); ++ia) {
    int a = (int)ia;  // arrow id = group element for a one-point bundle
    Rat expect(0);
    for (int b = 0; b < z6.order; ++b) expect += f.v[z6.mult[a][z6.inv[b]]] * mu.at(b);
    CHECK(got.v[ia] == expect);
  }
}

TEST_CASE("family convolution: unit family is neutral, uniform is idempotent on pairs") {
  std::mt19937_64 rng(4);
  Groupoid g = make_pair_groupoid(3);
  MeasureFamily<Rat> mu = rational_measure(g, rng);
  // delta at units
  std::vector<Rat> w(g.size(), Rat(0));
  for (ElementId u : g.units()) w[u] = Rat(1);
  MeasureFamily<Rat> delta(g, std::move(w));
  MeasureFamily<Rat> conv = convolve_families(mu, delta);
  for (int a = 0; a < g.size(); ++a) CHECK(conv.at(a) == mu.at(a));

  MeasureFamily<Rat> uni = MeasureFamily<Rat>::uniform(g);
  MeasureFamily<Rat> uu = convolve_families(uni, uni);
  for (int a = 0; a < g.size(); ++a) CHECK(uu.at(a) == Rat(1, 3));
}

TEST_CASE("family convolution is associative") {
  std::mt19937_64 rng(5);
  auto z2 = CayleyGroup::cyclic(2);
  Groupoid g = make_product(make_group_bundle(1, z2), make_pair_groupoid(2));
  for (int rep = 0; rep < 20; ++rep) {
    MeasureFamily<Rat> mu = rational_measure(g, rng);
    MeasureFamily<Rat> nu = rational_measure(g, rng);
    MeasureFamily<Rat> rho = rational_measure(g, rng);
    MeasureFamily<Rat> a = convolve_families(convolve_families(mu, nu), rho);
    MeasureFamily<Rat> b = convolve_families(mu, convolve_families(nu, rho));
    for (int e = 0; e < g.size(); ++e) CHECK(a.at(e) == b.at(e));
  }
}

TEST_CASE("markov operators: unital, multiplicative, dual to convolution") {
  std::mt19937_64 rng(6);
  Groupoid g = make_pair_groupoid(3);
  for (int rep = 0; rep < 30; ++rep) {
    MeasureFamily<Rat> mu = rational_measure(g, rng);
    MeasureFamily<Rat> nu = rational_measure(g, rng);
    ElementId x = g.units()[rep % 3];
    const auto& fiber = g.range_fiber(x);
    const size_t m = fiber.size();
    auto p = markov_matrix(mu, x);
    // rows sum to 1
    for (size_t i = 0; i < m; ++i) {
      Rat s(0);
      for (size_t j = 0; j < m; ++j) s += p[i * m + j];
      CHECK(s == Rat(1));
    }
    // P(1) = 1 through apply_markov as well
    FiberFunction<Rat> one;
    one.x = x;
    one.v.assign(m, Rat(1));
    for (const Rat& v : apply_markov(mu, one).v) CHECK(v == Rat(1));
    // P_mu P_nu = P_{mu*nu}
    auto q = markov_matrix(nu, x);
    auto pq = markov_matrix(convolve_families(mu, nu), x);
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        Rat acc(0);
        for (size_t k = 0; k < m; ++k) acc += p[i * m + k] * q[k * m + j];
        CHECK(acc == pq[i * m + j]);
      }
    // theta P = theta * mu
    FiberFunction<Rat> theta;
    theta.x = x;
    std::uniform_int_distribution<int> numer(-5, 5);
    for (size_t i = 0; i < m; ++i) theta.v.push_back(Rat(numer(rng), 2));
    FiberFunction<Rat> tp;
    tp.x = x;
    tp.v.assign(m, Rat(0));
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) tp.v[j] += theta.v[i] * p[i * m + j];
    FiberFunction<Rat> tc = convolve(g, theta, mu);
    for (size_t i = 0; i < m; ++i) CHECK(tp.v[i] == tc.v[i]);
  }
}

TEST_CASE("reiter profile: zero cases") {
  Groupoid g = make_pair_groupoid(3);
  MeasureFamily<double> uni = MeasureFamily<double>::uniform(g);
  for (ElementId a = 0; a < g.size(); ++a)
    for (double v : reiter_profile(uni, a, 6)) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  // units translate trivially for any measure
  std::mt19937_64 rng(7);
  MeasureFamily<double> mu = to_double(rational_measure(g, rng));
  for (ElementId u : g.units())
    for (double v : reiter_profile(mu, u, 6)) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("reiter profile decays geometrically on the two-state chain") {
  Groupoid g = make_group_bundle(1, CayleyGroup::cyclic(2));
  const double eps = 0.1;
  MeasureFamily<double> mu(g, {0.5 + eps, 0.5 - eps});
  ElementId flip = 1;
  auto prof = reiter_profile(mu, flip, 12);
  // power iteration of the 2-state chain: ||g mu^n - mu^n||_1 = 2 (2 eps)^n
  double p0 = 0.5 + eps, p1 = 0.5 - eps;
  for (int n = 1; n <= 12; ++n) {
    if (n > 1) {
      double q0 = p0 * (0.5 + eps) + p1 * (0.5 - eps);
      double q1 = p0 * (0.5 - eps) + p1 * (0.5 + eps);
      p0 = q0;
      p1 = q1;
    }
    CHECK(prof[n - 1] == doctest::Approx(2 * std::abs(p0 - p1)).epsilon(1e-10));
    CHECK(prof[n - 1] == doctest::Approx(2 * std::pow(2 * eps, n)).epsilon(1e-9));
  }
}

TEST_CASE("harmonic fixed space: constants for irreducible chains") {
  std::mt19937_64 rng(8);
  Groupoid g = make_pair_groupoid(3);
  MeasureFamily<double> mu = to_double(rational_measure(g, rng));
  REQUIRE(mu.full_support());
  for (ElementId x : g.units()) {
    auto fs = harmonic_fixed_space(markov_matrix_dense(mu, x));
    CHECK(fs.dimension == 1);
    CHECK(fs.trivial);
    CHECK(fs.residual <= 1e-10);
  }
}

TEST_CASE("harmonic fixed space: disconnected base, fiber chain still irreducible") {
  std::mt19937_64 rng(9);
  Groupoid g = make_group_bundle(2, CayleyGroup::cyclic(3));
  REQUIRE(g.orbits().size() == 2);
  MeasureFamily<double> mu = to_double(rational_measure(g, rng));
  for (ElementId x : g.units()) {
    auto fs = harmonic_fixed_space(markov_matrix_dense(mu, x));
    CHECK(fs.dimension == 1);
    CHECK(fs.trivial);
  }
}

TEST_CASE("harmonic fixed space: identity operator has full fixed space") {
  Groupoid g = make_group_bundle(1, CayleyGroup::cyclic(4));
  std::vector<double> w(g.size(), 0.0);
  for (ElementId u : g.units()) w[u] = 1.0;  // degenerate: concentrated on units
  MeasureFamily<double> mu(g, std::move(w));
  CHECK(!mu.full_support());
  auto fs = harmonic_fixed_space(markov_matrix_dense(mu, g.units()[0]));
  CHECK(fs.dimension == 4);
}

TEST_CASE("measure validation rejects bad families") {
  Groupoid g = make_pair_groupoid(2);
  std::vector<Rat> w(g.size(), Rat(0));
  w[0] = Rat(1, 2);  // fiber does not sum to 1
  CHECK_THROWS_AS(MeasureFamily<Rat>(g, w), std::invalid_argument);
  std::vector<Rat> neg(g.size(), Rat(0));
  neg[0] = Rat(3, 2);
  neg[1] = Rat(-1, 2);
  CHECK_THROWS_AS(MeasureFamily<Rat>(g, neg), std::invalid_argument);
}
