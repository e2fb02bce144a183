#include "gpd/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gpd {

CayleyGroup CayleyGroup::cyclic(int k) {
  if (k < 1) throw std::invalid_argument("cyclic: order must be positive");
  CayleyGroup g;
  g.order = k;
  g.identity = 0;
  g.mult.assign(k, std::vector<int>(k));
  g.inv.assign(k, 0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) g.mult[a][b] = (a + b) % k;
    g.inv[a] = (k - a) % k;
  }
  return g;
}

CayleyGroup CayleyGroup::product(const CayleyGroup& a, const CayleyGroup& b) {
  CayleyGroup g;
  g.order = a.order * b.order;
  g.identity = a.identity * b.order + b.identity;
  g.mult.assign(g.order, std::vector<int>(g.order));
  g.inv.assign(g.order, 0);
  for (int x = 0; x < g.order; ++x) {
    int xa = x / b.order, xb = x % b.order;
    g.inv[x] = a.inv[xa] * b.order + b.inv[xb];
    for (int y = 0; y < g.order; ++y) {
      int ya = y / b.order, yb = y % b.order;
      g.mult[x][y] = a.mult[xa][ya] * b.order + b.mult[xb][yb];
    }
  }
  return g;
}

void CayleyGroup::validate() const {
  if ((int)mult.size() != order || (int)inv.size() != order)
    throw std::invalid_argument("CayleyGroup: table size mismatch");
  for (int a = 0; a < order; ++a) {
    if (mult[a][identity] != a || mult[identity][a] != a)
      throw std::invalid_argument("CayleyGroup: identity fails at " + std::to_string(a));
    if (mult[a][inv[a]] != identity || mult[inv[a]][a] != identity)
      throw std::invalid_argument("CayleyGroup: inverse fails at " + std::to_string(a));
  }
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      for (int c = 0; c < order; ++c)
        if (mult[mult[a][b]][c] != mult[a][mult[b][c]])
          throw std::invalid_argument("CayleyGroup: associativity fails");
}

std::string ValidationReport::str() const {
  if (ok()) return "ok";
  std::string s;
  for (const auto& v : violations) {
    s += v.rule + " at (";
    for (size_t i = 0; i < v.where.size(); ++i)
      s += (i ? "," : "") + std::to_string(v.where[i]);
    s += "); ";
  }
  return s;
}

Groupoid::Groupoid(std::vector<ElementId> source, std::vector<ElementId> range,
                   std::vector<ElementId> inverse,
                   const std::vector<std::array<ElementId, 3>>& compose_entries)
    : n_((int)source.size()),
      source_(std::move(source)),
      range_(std::move(range)),
      inverse_(std::move(inverse)) {
  if ((int)range_.size() != n_ || (int)inverse_.size() != n_)
    throw std::invalid_argument("Groupoid: map size mismatch");
  auto in_range = [&](ElementId e) { return e >= 0 && e < n_; };
  for (int g = 0; g < n_; ++g)
    if (!in_range(source_[g]) || !in_range(range_[g]) || !in_range(inverse_[g]))
      throw std::invalid_argument("Groupoid: element id out of range");

  table_.assign((size_t)n_ * n_, -1);
  for (const auto& e : compose_entries) {
    if (!in_range(e[0]) || !in_range(e[1]) || !in_range(e[2]))
      throw std::invalid_argument("Groupoid: composition entry out of range");
    table_[(size_t)e[0] * n_ + e[1]] = e[2];
  }

  // Units are the arrows that appear as sources/ranges.
  is_unit_.assign(n_, 0);
  for (int g = 0; g < n_; ++g) {
    is_unit_[source_[g]] = 1;
    is_unit_[range_[g]] = 1;
  }
  for (int g = 0; g < n_; ++g)
    if (is_unit_[g]) units_.push_back(g);

  range_fiber_.assign(n_, {});
  source_fiber_.assign(n_, {});
  isotropy_.assign(n_, {});
  for (int g = 0; g < n_; ++g) {
    range_fiber_[range_[g]].push_back(g);
    source_fiber_[source_[g]].push_back(g);
    if (source_[g] == range_[g]) isotropy_[source_[g]].push_back(g);
  }

  // orbits of ~ on the unit space (union-find over arrows)
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int g = 0; g < n_; ++g) {
    int a = find(source_[g]), b = find(range_[g]);
    if (a != b) parent[a] = b;
  }
  orbit_index_.assign(n_, -1);
  std::map<int, int> root_to_orbit;
  for (ElementId u : units_) {
    int r = find(u);
    auto it = root_to_orbit.find(r);
    if (it == root_to_orbit.end()) {
      it = root_to_orbit.emplace(r, (int)orbits_.size()).first;
      orbits_.push_back({});
    }
    orbit_index_[u] = it->second;
    orbits_[it->second].push_back(u);
  }
}

ElementId Groupoid::compose(ElementId g, ElementId h) const {
  ElementId r = table_[(size_t)g * n_ + h];
  if (r < 0)
    throw std::invalid_argument("compose: undefined at (" + std::to_string(g) + "," +
                                std::to_string(h) + ")");
  return r;
}

ElementId Groupoid::compose(std::span<const ElementId> word) const {
  if (word.empty()) throw std::invalid_argument("compose: empty word");
  ElementId acc = word[0];
  for (size_t i = 1; i < word.size(); ++i) acc = compose(acc, word[i]);
  return acc;
}

const std::vector<ElementId>& Groupoid::range_fiber(ElementId x) const {
  return range_fiber_[x];
}
const std::vector<ElementId>& Groupoid::source_fiber(ElementId x) const {
  return source_fiber_[x];
}
const std::vector<ElementId>& Groupoid::isotropy(ElementId x) const { return isotropy_[x]; }

std::vector<ElementId> Groupoid::hom_set(ElementId y, ElementId x) const {
  std::vector<ElementId> out;
  for (ElementId g : range_fiber_[y])
    if (source_[g] == x) out.push_back(g);
  return out;
}

ValidationReport validate(const Groupoid& g) {
  ValidationReport rep;
  const int n = g.size();
  auto add = [&](std::string rule, std::vector<ElementId> where) {
    rep.violations.push_back({std::move(rule), std::move(where)});
  };

  for (ElementId u : g.units()) {
    if (g.source(u) != u || g.range(u) != u) add("unit source/range", {u});
    if (g.inverse(u) != u) add("unit inverse", {u});
  }
  for (ElementId a = 0; a < n; ++a) {
    ElementId i = g.inverse(a);
    if (g.source(i) != g.range(a) || g.range(i) != g.source(a)) add("inverse maps", {a});
    if (g.inverse(i) != a) add("inverse involution", {a});
    // g * r(g)^... identities
    if (g.compose_raw(g.range(a), a) != a) add("left identity", {g.range(a), a});
    if (g.compose_raw(a, g.source(a)) != a) add("right identity", {a, g.source(a)});
    if (g.compose_raw(a, i) != g.range(a)) add("g*g^-1 = r(g)", {a, i});
    if (g.compose_raw(i, a) != g.source(a)) add("g^-1*g = s(g)", {i, a});
  }
  for (ElementId a = 0; a < n; ++a) {
    for (ElementId b = 0; b < n; ++b) {
      ElementId ab = g.compose_raw(a, b);
      bool should = g.source(a) == g.range(b);
      if (should != (ab >= 0)) {
        add("composition domain", {a, b});
        continue;
      }
      if (ab < 0) continue;
      if (g.source(ab) != g.source(b) || g.range(ab) != g.range(a))
        add("s(gh)=s(h), r(gh)=r(g)", {a, b});
    }
  }
  // associativity on every composable triple
  for (ElementId a = 0; a < n; ++a)
    for (ElementId b : g.range_fiber(g.source(a)))
      for (ElementId c : g.range_fiber(g.source(b))) {
        ElementId ab = g.compose_raw(a, b), bc = g.compose_raw(b, c);
        if (ab < 0 || bc < 0) continue;  // already reported above
        if (g.compose_raw(ab, c) != g.compose_raw(a, bc)) add("associativity", {a, b, c});
      }
  return rep;
}

std::vector<std::vector<ElementId>> composable_tuples(const Groupoid& g, int n,
                                                      const TupleConstraints& c) {
  if (n < 1) throw std::invalid_argument("composable_tuples: n must be >= 1");
  std::vector<std::vector<ElementId>> out;
  std::vector<ElementId> cur(n);
  // legs chosen left to right; ids within a fiber are already sorted, and for
  // the unconstrained first leg we scan ids in order, so output is lexicographic
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      out.push_back(cur);
      return;
    }
    auto try_leg = [&](ElementId t) {
      if (c.source_unit && depth == n - 1 && g.source(t) != *c.source_unit) return;
      cur[depth] = t;
      self(self, depth + 1);
    };
    if (depth == 0) {
      if (c.range_unit) {
        for (ElementId t : g.range_fiber(*c.range_unit)) try_leg(t);
      } else {
        for (ElementId t = 0; t < g.size(); ++t) try_leg(t);
      }
    } else {
      for (ElementId t : g.range_fiber(g.source(cur[depth - 1]))) try_leg(t);
    }
  };
  rec(rec, 0);
  return out;
}

ElementId SemidirectPresentation::sigma(ElementId y, ElementId x) const {
  auto it = section.find({y, x});
  if (it == section.end())
    throw std::invalid_argument("sigma: units not related (" + std::to_string(y) + "," +
                                std::to_string(x) + ")");
  return it->second;
}

ElementId SemidirectPresentation::isotropy_part(ElementId arrow) const {
  ElementId r = g->range(arrow), s = g->source(arrow);
  return g->compose(arrow, g->inverse(sigma(r, s)));
}

SemidirectPresentation semidirect(const Groupoid& g, SectionRule rule) {
  SemidirectPresentation p;
  p.g = &g;
  for (const auto& orbit : g.orbits()) {
    ElementId base = orbit.front();  // least unit in the orbit
    std::map<ElementId, ElementId> to_base;  // z -> arrow in G^base_z
    for (ElementId z : orbit) {
      auto hom = g.hom_set(base, z);
      to_base[z] = (rule == SectionRule::least_base) ? hom.front() : hom.back();
    }
    to_base[base] = base;  // the unit itself anchors the orbit
    for (ElementId y : orbit)
      for (ElementId x : orbit)
        p.section[{y, x}] = g.compose(g.inverse(to_base[y]), to_base[x]);
  }
  return p;
}

Groupoid make_pair_groupoid(int m) {
  if (m < 1) throw std::invalid_argument("pair groupoid: need m >= 1");
  auto id = [m](int i, int j) { return i * m + j; };
  std::vector<ElementId> src(m * m), rng(m * m), inv(m * m);
  std::vector<std::array<ElementId, 3>> comp;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      src[id(i, j)] = id(j, j);
      rng[id(i, j)] = id(i, i);
      inv[id(i, j)] = id(j, i);
      for (int k = 0; k < m; ++k) comp.push_back({id(i, j), id(j, k), id(i, k)});
    }
  return Groupoid(src, rng, inv, comp);
}

Groupoid make_group_bundle(int n_points, const CayleyGroup& gamma) {
  if (n_points < 1) throw std::invalid_argument("group bundle: need >= 1 point");
  gamma.validate();
  const int k = gamma.order;
  auto id = [k](int x, int a) { return x * k + a; };
  const int n = n_points * k;
  std::vector<ElementId> src(n), rng(n), inv(n);
  std::vector<std::array<ElementId, 3>> comp;
  for (int x = 0; x < n_points; ++x)
    for (int a = 0; a < k; ++a) {
      src[id(x, a)] = id(x, gamma.identity);
      rng[id(x, a)] = id(x, gamma.identity);
      inv[id(x, a)] = id(x, gamma.inv[a]);
      for (int b = 0; b < k; ++b) comp.push_back({id(x, a), id(x, b), id(x, gamma.mult[a][b])});
    }
  return Groupoid(src, rng, inv, comp);
}

Groupoid make_transformation_groupoid(const CayleyGroup& gamma,
                                      const std::vector<std::vector<int>>& act) {
  gamma.validate();
  const int m = (int)act.empty() ? 0 : (int)act[0].size();
  if ((int)act.size() != gamma.order || m == 0)
    throw std::invalid_argument("transformation groupoid: action table shape");
  for (int x = 0; x < m; ++x)
    if (act[gamma.identity][x] != x)
      throw std::invalid_argument("transformation groupoid: identity does not fix " +
                                  std::to_string(x));
  for (int a = 0; a < gamma.order; ++a)
    for (int b = 0; b < gamma.order; ++b)
      for (int x = 0; x < m; ++x)
        if (act[gamma.mult[a][b]][x] != act[a][act[b][x]])
          throw std::invalid_argument("transformation groupoid: not an action at pair (" +
                                      std::to_string(a) + "," + std::to_string(b) + ")");
  auto id = [m](int a, int x) { return a * m + x; };
  const int n = gamma.order * m;
  std::vector<ElementId> src(n), rng(n), inv(n);
  std::vector<std::array<ElementId, 3>> comp;
  for (int a = 0; a < gamma.order; ++a)
    for (int x = 0; x < m; ++x) {
      src[id(a, x)] = id(gamma.identity, x);
      rng[id(a, x)] = id(gamma.identity, act[a][x]);
      inv[id(a, x)] = id(gamma.inv[a], act[a][x]);
      // (a, b.x) o (b, x) = (ab, x)
      for (int b = 0; b < gamma.order; ++b)
        comp.push_back({id(a, act[b][x]), id(b, x), id(gamma.mult[a][b], x)});
    }
  return Groupoid(src, rng, inv, comp);
}

Groupoid make_product(const Groupoid& a, const Groupoid& b) {
  const int nb = b.size();
  auto id = [nb](ElementId x, ElementId y) { return x * nb + y; };
  const int n = a.size() * nb;
  std::vector<ElementId> src(n), rng(n), inv(n);
  std::vector<std::array<ElementId, 3>> comp;
  for (ElementId x = 0; x < a.size(); ++x)
    for (ElementId y = 0; y < nb; ++y) {
      src[id(x, y)] = id(a.source(x), b.source(y));
      rng[id(x, y)] = id(a.range(x), b.range(y));
      inv[id(x, y)] = id(a.inverse(x), b.inverse(y));
      for (ElementId x2 : a.range_fiber(a.source(x)))
        for (ElementId y2 : b.range_fiber(b.source(y)))
          comp.push_back({id(x, y), id(x2, y2), id(a.compose(x, x2), b.compose(y, y2))});
    }
  return Groupoid(src, rng, inv, comp);
}

std::vector<int> bundle_labels(int n_points, const CayleyGroup& gamma) {
  std::vector<int> lab(n_points * gamma.order);
  for (int x = 0; x < n_points; ++x)
    for (int a = 0; a < gamma.order; ++a) lab[x * gamma.order + a] = a;
  return lab;
}

std::vector<int> transformation_labels(const CayleyGroup& gamma, int n_points) {
  std::vector<int> lab(gamma.order * n_points);
  for (int a = 0; a < gamma.order; ++a)
    for (int x = 0; x < n_points; ++x) lab[a * n_points + x] = a;
  return lab;
}

std::vector<int> product_first_factor_labels(const std::vector<int>& labels_a, int size_b) {
  std::vector<int> lab(labels_a.size() * size_b);
  for (size_t x = 0; x < labels_a.size(); ++x)
    for (int y = 0; y < size_b; ++y) lab[x * size_b + y] = labels_a[x];
  return lab;
}

}  // namespace gpd
