#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpd/cochain.hpp"
#include "gpd/groupoid.hpp"
#include "gpd/phase.hpp"

namespace gpd {

// Unitary of a finite commutative coefficient fiber: one phase per point.
using BundleUnitary = std::vector<Phase>;

// Finite stand-in for the flow of weights: per unit a finite point set F_x
// with a single shift automorphism theta (generating a Z-action) and a
// groupoid action beta commuting with it. Unitaries are Phase-valued
// functions on F_x acted on by precomposition with the inverse point map.
struct CoefficientBundle {
  const Groupoid* g = nullptr;
  std::vector<int> fiber_size;          // indexed by unit id
  std::vector<std::vector<int>> theta;  // per unit: permutation of F_x
  std::vector<std::vector<int>> beta;   // per arrow: bijection F_{s(g)} -> F_{r(g)}

  static CoefficientBundle scalar(const Groupoid& g);  // |F_x| = 1 everywhere
  void validate() const;  // beta functorial, beta o theta = theta o beta, units act as id

  BundleUnitary one(ElementId x) const { return BundleUnitary(fiber_size[x], Phase::one()); }
  // theta_t(u), t in Z
  BundleUnitary apply_theta(ElementId x, int t, const BundleUnitary& u) const;
  // beta_g(u): unitary over F_{s(g)} -> unitary over F_{r(g)}
  BundleUnitary apply_beta(ElementId arrow, const BundleUnitary& u) const;
};

BundleUnitary bu_mul(const BundleUnitary& a, const BundleUnitary& b);
BundleUnitary bu_conj(const BundleUnitary& a);
BundleUnitary bu_scale(const BundleUnitary& a, const Phase& p);
bool bu_is_one(const BundleUnitary& a);

// Conjugation-stable family of subgroups of the isotropy bundle.
struct NormalSubgroupoid {
  const Groupoid* g = nullptr;
  std::vector<char> member;  // per arrow

  bool contains(ElementId a) const { return member[a] != 0; }
  std::vector<ElementId> fiber(ElementId x) const;  // N_x, sorted
  void validate() const;  // subgroup per unit, g N_{s(g)} g^{-1} = N_{r(g)}
};

// (lambda, mu, d) over the bundle; absent table entries mean the trivial
// unitary (the normalization on units is the same convention as cochains).
// d is tabulated over an integer window around 0.
struct CharCocycle {
  NormalSubgroupoid n;
  std::map<std::pair<ElementId, ElementId>, BundleUnitary> lambda;  // (n, g), n in N_{r(g)}
  std::map<std::pair<ElementId, ElementId>, BundleUnitary> mu;      // (m, n) in N_x^2
  std::map<std::pair<ElementId, int>, BundleUnitary> d;             // (n, t), t in window
  int t_min = -3, t_max = 3;

  BundleUnitary lam_at(const CoefficientBundle& b, ElementId nn, ElementId g) const;
  BundleUnitary mu_at(const CoefficientBundle& b, ElementId m, ElementId nn) const;
  BundleUnitary d_at(const CoefficientBundle& b, ElementId nn, int t) const;

  static CharCocycle trivial(const NormalSubgroupoid& n);
  // fill d over the window from generators d(n,1) via the Z-cocycle rule
  void generate_d(const CoefficientBundle& b,
                  const std::map<ElementId, BundleUnitary>& d_gen);
};

struct RelationVerdict {
  std::string relation;
  bool pass = true;
  long cases = 0;
  std::string first_violation;
};

struct CCReport {
  std::vector<RelationVerdict> relations;  // CC1..CC7 in order
  bool all_pass() const;
  const RelationVerdict& at(int i) const { return relations[i - 1]; }
};

// Exact check of (CC1)-(CC7); t, s range over the tabulated window.
CCReport check_CC(const CoefficientBundle& b, const CharCocycle& chi, const Cochain& c);

// The z-twist (lambda, mu, d) -> (beta_g(z(g^-1ng)) lambda z(n)^*, ...);
// z maps (x, n in N_x) to a unitary of C(x), trivial on units.
CharCocycle coboundary_perturb(const CoefficientBundle& b, const CharCocycle& chi,
                               const std::map<ElementId, BundleUnitary>& z);

// Exhaustive scalar-fiber solution search for (lambda, mu) valued in
// root_order-th roots of unity, filtered by (CC3)-(CC6); when with_d is set
// each solution is extended by all d-generators passing (CC1),(CC2),(CC7).
std::vector<CharCocycle> search_scalar_solutions(const CoefficientBundle& b,
                                                 const NormalSubgroupoid& n, const Cochain& c,
                                                 int root_order, bool with_d);

}  // namespace gpd
