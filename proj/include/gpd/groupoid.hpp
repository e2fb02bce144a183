#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gpd {

// Arrows are dense integer ids; the integer order breaks all ties.
using ElementId = int;

// Finite group presented by its multiplication table; used for bundle and
// transformation groupoid construction and for the quotient layer.
struct CayleyGroup {
  int order = 0;
  int identity = 0;
  std::vector<std::vector<int>> mult;  // mult[a][b]
  std::vector<int> inv;

  static CayleyGroup cyclic(int k);
  // direct product, lexicographic element numbering (a*|B|+b)
  static CayleyGroup product(const CayleyGroup& a, const CayleyGroup& b);
  void validate() const;  // associativity, identity, inverses
};

struct AxiomViolation {
  std::string rule;
  std::vector<ElementId> where;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

// Finite discrete groupoid: total source/range/inverse, partial composition
// stored as a dense table. Immutable after construction; all accessors are
// O(1) or return precomputed fibers.
class Groupoid {
 public:
  Groupoid(std::vector<ElementId> source, std::vector<ElementId> range,
           std::vector<ElementId> inverse,
           const std::vector<std::array<ElementId, 3>>& compose_entries);

  int size() const { return n_; }
  bool is_unit(ElementId g) const { return is_unit_[g]; }
  const std::vector<ElementId>& units() const { return units_; }

  ElementId source(ElementId g) const { return source_[g]; }
  ElementId range(ElementId g) const { return range_[g]; }
  ElementId inverse(ElementId g) const { return inverse_[g]; }

  bool composable(ElementId g, ElementId h) const { return source_[g] == range_[h]; }
  // throws std::invalid_argument when s(g) != r(h)
  ElementId compose(ElementId g, ElementId h) const;
  // raw table access: -1 where undefined (validation walks this directly)
  ElementId compose_raw(ElementId g, ElementId h) const { return table_[g * n_ + h]; }

  ElementId compose(std::span<const ElementId> word) const;
  ElementId compose(std::initializer_list<ElementId> word) const {
    return compose(std::span<const ElementId>(word.begin(), word.size()));
  }

  // G^x, G_x, H_x (sorted by id)
  const std::vector<ElementId>& range_fiber(ElementId x) const;
  const std::vector<ElementId>& source_fiber(ElementId x) const;
  const std::vector<ElementId>& isotropy(ElementId x) const;
  std::vector<ElementId> hom_set(ElementId y, ElementId x) const;  // G^y_x

  // orbit structure of the unit space
  const std::vector<std::vector<ElementId>>& orbits() const { return orbits_; }
  bool transitive() const { return orbits_.size() <= 1; }
  bool related(ElementId y, ElementId x) const { return orbit_index_[y] == orbit_index_[x]; }

 private:
  int n_ = 0;
  std::vector<ElementId> source_, range_, inverse_;
  std::vector<ElementId> table_;  // n*n, -1 = undefined
  std::vector<char> is_unit_;
  std::vector<ElementId> units_;
  std::vector<std::vector<ElementId>> range_fiber_, source_fiber_, isotropy_;
  std::vector<std::vector<ElementId>> orbits_;
  std::vector<int> orbit_index_;  // per unit id; -1 for non-units
};

// Exhaustive axiom scan; violations are data, not failures.
ValidationReport validate(const Groupoid& g);

struct TupleConstraints {
  std::optional<ElementId> range_unit;   // r(t_1) = x
  std::optional<ElementId> source_unit;  // s(t_n) = y
};

// G^{(n)} (optionally fiber-restricted), in lexicographic id order.
std::vector<std::vector<ElementId>> composable_tuples(const Groupoid& g, int n,
                                                      const TupleConstraints& c = {});

// G = H x| K with a coherent section: within each orbit, sigma(y,x) =
// b_y^{-1} b_x for base arrows b_z from z to the orbit's least unit, so
// sigma(x,x) = x, sigma(x,y) = sigma(y,x)^{-1} and
// sigma(z,y)sigma(y,x) = sigma(z,x) hold by construction.
struct SemidirectPresentation {
  const Groupoid* g = nullptr;
  std::map<std::pair<ElementId, ElementId>, ElementId> section;  // (y,x) -> arrow

  bool defined(ElementId y, ElementId x) const { return section.count({y, x}) > 0; }
  ElementId sigma(ElementId y, ElementId x) const;
  // unique factorization arrow = h * sigma(r,s) with h in H_r
  ElementId isotropy_part(ElementId arrow) const;
};

enum class SectionRule {
  least_base,     // base arrow to the orbit's least unit = least id in that hom set
  greatest_base,  // same construction from the greatest id (second section for tests)
};

SemidirectPresentation semidirect(const Groupoid& g,
                                  SectionRule rule = SectionRule::least_base);

// --- generators ---------------------------------------------------------

// pair groupoid on m points: arrows (i,j), id = i*m+j, r=(i,i), s=(j,j)
Groupoid make_pair_groupoid(int m);

// bundle of copies of Gamma over n_points units: arrow id = x*|Gamma|+a
Groupoid make_group_bundle(int n_points, const CayleyGroup& gamma);

// transformation groupoid Gamma |x X for action act[a][x] (left action);
// arrow id = a*|X|+x with s = x, r = act[a][x]; throws on a non-action table
Groupoid make_transformation_groupoid(const CayleyGroup& gamma,
                                      const std::vector<std::vector<int>>& act);

// product groupoid; arrow id = a_id*|B|+b_id
Groupoid make_product(const Groupoid& a, const Groupoid& b);

// arrow -> group element labels for the canonical homomorphisms of the
// generated families (bundle/transformation: the Gamma coordinate)
std::vector<int> bundle_labels(int n_points, const CayleyGroup& gamma);
std::vector<int> transformation_labels(const CayleyGroup& gamma, int n_points);
std::vector<int> product_first_factor_labels(const std::vector<int>& labels_a, int size_b);

}  // namespace gpd
