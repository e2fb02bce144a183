#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "gpd/groupoid.hpp"
#include "gpd/phase.hpp"

namespace gpd {

// Circle-valued n-cochain on composable tuples, normalized: the value is the
// trivial phase whenever a leg is a unit. Only nontrivial entries are stored.
class Cochain {
 public:
  Cochain(const Groupoid& g, int arity);

  int arity() const { return arity_; }
  const Groupoid& groupoid() const { return *g_; }

  Phase at(std::span<const ElementId> tuple) const;
  Phase at(std::initializer_list<ElementId> tuple) const {
    return at(std::span<const ElementId>(tuple.begin(), tuple.size()));
  }
  // rejects non-composable tuples and nontrivial values on unit-bearing tuples
  void set(std::span<const ElementId> tuple, const Phase& v);
  void set(std::initializer_list<ElementId> tuple, const Phase& v) {
    set(std::span<const ElementId>(tuple.begin(), tuple.size()), v);
  }

  size_t entry_count() const { return table_.size(); }
  // stored (tuple, phase) pairs in unspecified order
  std::vector<std::pair<std::vector<ElementId>, Phase>> entries() const;

  bool operator==(const Cochain& o) const;

 private:
  std::uint64_t key(std::span<const ElementId> t) const;
  void check_tuple(std::span<const ElementId> t) const;

  const Groupoid* g_;
  int arity_;
  std::unordered_map<std::uint64_t, Phase> table_;
};

struct CocycleVerdict {
  bool pass = true;
  std::optional<std::array<ElementId, 4>> witness;  // first violating 4-tuple
  long tuples_checked = 0;
};

// exhaustive 3-cocycle identity scan over G^{(4)}, exact
CocycleVerdict check_cocycle3(const Cochain& c);

// inhomogeneous coboundary with trivial coefficients, arity 1 -> 2 or 2 -> 3
Cochain coboundary(const Cochain& a);

// 3-cochain on a finite group, normalized (trivial when an argument is e)
struct GroupCochain3 {
  const CayleyGroup* group = nullptr;
  std::vector<Phase> v;  // index (a*|G|+b)*|G|+c
  Phase at(int a, int b, int c) const { return v[((size_t)a * group->order + b) * group->order + c]; }
  bool is_cocycle() const;
};

// the standard degree-`power` class on Z/k: c(a,b,c) = exp(2 pi i * power * a * floor((b+c)/k) / k)
GroupCochain3 cyclic_cocycle3(const CayleyGroup& zk, int power);

// pullback along an arrow labelling that is a homomorphism into the group
// (validated: labels respect composition, units map to the identity)
Cochain inflate(const GroupCochain3& c_group, const Groupoid& g, const std::vector<int>& hom);

// the two derived cochains attached to a relation arrow; arguments must be
// isotropy elements at r(gamma) (resp. r(gamma1))
Phase zeta(const Cochain& c, ElementId gamma, ElementId g, ElementId h);
Phase eta(const Cochain& c, ElementId gamma1, ElementId gamma2, ElementId g);

// uniform random normalized cochain; angles have denominator <= max_den
Cochain random_cochain(const Groupoid& g, int arity, std::mt19937_64& rng, int max_den = 24);

// valid-by-construction random 3-cocycle: inflation along `hom` (may be empty
// for the trivial pullback) times the coboundary of a random 2-cochain
Cochain random_cocycle3(const Groupoid& g, std::mt19937_64& rng,
                        const GroupCochain3* seed = nullptr,
                        const std::vector<int>* hom = nullptr);

Cochain multiply(const Cochain& a, const Cochain& b);

// On a transitive principal groupoid every normalized 3-cocycle bounds; the
// returned 2-cochain b satisfies coboundary(b) == c (cone over the arrows
// into the least unit). Throws when the groupoid is not transitive principal.
Cochain trivialize_principal(const Cochain& c);

}  // namespace gpd
