#include "gpd/cochain.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpd {

Cochain::Cochain(const Groupoid& g, int arity) : g_(&g), arity_(arity) {
  if (arity < 1 || arity > 4) throw std::invalid_argument("Cochain: arity out of range");
  if (g.size() > 255) throw std::invalid_argument("Cochain: groupoid too large to key");
}

std::uint64_t Cochain::key(std::span<const ElementId> t) const {
  std::uint64_t k = 0;
  for (ElementId e : t) k = (k << 8) | (std::uint64_t)(e & 0xff);
  return k;
}

void Cochain::check_tuple(std::span<const ElementId> t) const {
  if ((int)t.size() != arity_) throw std::invalid_argument("Cochain: arity mismatch");
  for (size_t i = 0; i + 1 < t.size(); ++i)
    if (!g_->composable(t[i], t[i + 1]))
      throw std::invalid_argument("Cochain: tuple not composable at position " +
                                  std::to_string(i));
}

Phase Cochain::at(std::span<const ElementId> t) const {
  check_tuple(t);
  auto it = table_.find(key(t));
  return it == table_.end() ? Phase::one() : it->second;
}

void Cochain::set(std::span<const ElementId> t, const Phase& v) {
  check_tuple(t);
  bool unit_leg = std::any_of(t.begin(), t.end(), [&](ElementId e) { return g_->is_unit(e); });
  if (unit_leg) {
    if (!v.is_one())
      throw std::invalid_argument("Cochain: nontrivial value on a unit-bearing tuple");
    return;
  }
  if (v.is_one())
    table_.erase(key(t));
  else
    table_[key(t)] = v;
}

std::vector<std::pair<std::vector<ElementId>, Phase>> Cochain::entries() const {
  std::vector<std::pair<std::vector<ElementId>, Phase>> out;
  out.reserve(table_.size());
  for (const auto& [k, v] : table_) {
    std::vector<ElementId> t(arity_);
    for (int i = arity_ - 1; i >= 0; --i) t[i] = (ElementId)((k >> (8 * (arity_ - 1 - i))) & 0xff);
    out.push_back({std::move(t), v});
  }
  return out;
}

bool Cochain::operator==(const Cochain& o) const {
  if (arity_ != o.arity_ || g_ != o.g_) return false;
  for (const auto& [k, v] : table_) {
    auto it = o.table_.find(k);
    if (it == o.table_.end() || it->second != v) return false;
  }
  for (const auto& [k, v] : o.table_)
    if (table_.find(k) == table_.end()) return false;
  return true;
}

CocycleVerdict check_cocycle3(const Cochain& c) {
  if (c.arity() != 3) throw std::invalid_argument("check_cocycle3: arity must be 3");
  const Groupoid& g = c.groupoid();
  CocycleVerdict verdict;
  for (const auto& t : composable_tuples(g, 4)) {
    ElementId a = t[0], b = t[1], k = t[2], l = t[3];
    ElementId ab = g.compose(a, b), bk = g.compose(b, k), kl = g.compose(k, l);
    Phase lhs = c.at({a, b, k}) * c.at({a, b, kl}).conj() * c.at({a, bk, l}) *
                c.at({ab, k, l}).conj() * c.at({b, k, l});
    ++verdict.tuples_checked;
    if (!lhs.is_one()) {
      verdict.pass = false;
      verdict.witness = {a, b, k, l};
      return verdict;
    }
  }
  return verdict;
}

Cochain coboundary(const Cochain& a) {
  const Groupoid& g = a.groupoid();
  if (a.arity() == 1) {
    Cochain out(g, 2);
    for (const auto& t : composable_tuples(g, 2)) {
      ElementId x = t[0], y = t[1];
      out.set({x, y}, a.at({y}) * a.at({g.compose(x, y)}).conj() * a.at({x}));
    }
    return out;
  }
  if (a.arity() == 2) {
    Cochain out(g, 3);
    for (const auto& t : composable_tuples(g, 3)) {
      ElementId x = t[0], y = t[1], z = t[2];
      out.set({x, y, z}, a.at({y, z}) * a.at({x, g.compose(y, z)}) *
                             a.at({g.compose(x, y), z}).conj() * a.at({x, y}).conj());
    }
    return out;
  }
  throw std::invalid_argument("coboundary: arity must be 1 or 2");
}

bool GroupCochain3::is_cocycle() const {
  const auto& m = group->mult;
  for (int a = 0; a < group->order; ++a)
    for (int b = 0; b < group->order; ++b)
      for (int c = 0; c < group->order; ++c)
        for (int d = 0; d < group->order; ++d) {
          Phase p = at(a, b, c) * at(a, b, m[c][d]).conj() * at(a, m[b][c], d) *
                    at(m[a][b], c, d).conj() * at(b, c, d);
          if (!p.is_one()) return false;
        }
  return true;
}

GroupCochain3 cyclic_cocycle3(const CayleyGroup& zk, int power) {
  const int k = zk.order;
  GroupCochain3 c;
  c.group = &zk;
  c.v.assign((size_t)k * k * k, Phase::one());
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int x = 0; x < k; ++x)
        c.v[((size_t)a * k + b) * k + x] = Phase::of((std::int64_t)power * a * ((b + x) / k), k);
  return c;
}

Cochain inflate(const GroupCochain3& c_group, const Groupoid& g, const std::vector<int>& hom) {
  if ((int)hom.size() != g.size()) throw std::invalid_argument("inflate: label size mismatch");
  const CayleyGroup& gam = *c_group.group;
  for (int e = 0; e < g.size(); ++e) {
    if (hom[e] < 0 || hom[e] >= gam.order)
      throw std::invalid_argument("inflate: label out of range at " + std::to_string(e));
    if (g.is_unit(e) && hom[e] != gam.identity)
      throw std::invalid_argument("inflate: unit " + std::to_string(e) +
                                  " does not map to the identity");
  }
  for (const auto& t : composable_tuples(g, 2))
    if (hom[g.compose(t[0], t[1])] != gam.mult[hom[t[0]]][hom[t[1]]])
      throw std::invalid_argument("inflate: labels break composition at (" +
                                  std::to_string(t[0]) + "," + std::to_string(t[1]) + ")");
  Cochain out(g, 3);
  for (const auto& t : composable_tuples(g, 3)) {
    if (g.is_unit(t[0]) || g.is_unit(t[1]) || g.is_unit(t[2])) continue;
    out.set({t[0], t[1], t[2]}, c_group.at(hom[t[0]], hom[t[1]], hom[t[2]]));
  }
  return out;
}

Phase zeta(const Cochain& c, ElementId gamma, ElementId g, ElementId h) {
  const Groupoid& gr = c.groupoid();
  ElementId y = gr.range(gamma);
  if (gr.source(g) != y || gr.range(g) != y || gr.source(h) != y || gr.range(h) != y)
    throw std::invalid_argument("zeta: g,h must be isotropy at r(gamma)");
  ElementId gi = gr.inverse(gamma);
  ElementId cg = gr.compose({gi, g, gamma});  // gamma^-1 g gamma
  ElementId ch = gr.compose({gi, h, gamma});
  return c.at({g, h, gamma}).conj() * c.at({g, gamma, ch}) * c.at({gamma, cg, ch}).conj();
}

Phase eta(const Cochain& c, ElementId gamma1, ElementId gamma2, ElementId g) {
  const Groupoid& gr = c.groupoid();
  if (!gr.composable(gamma1, gamma2))
    throw std::invalid_argument("eta: gamma1, gamma2 not composable");
  ElementId y = gr.range(gamma1);
  if (gr.source(g) != y || gr.range(g) != y)
    throw std::invalid_argument("eta: g must be isotropy at r(gamma1)");
  ElementId g1i = gr.inverse(gamma1);
  ElementId c1 = gr.compose({g1i, g, gamma1});            // gamma1^-1 g gamma1
  ElementId c12 = gr.compose({gr.inverse(gamma2), c1, gamma2});
  return c.at({gamma1, c1, gamma2}).conj() * c.at({gamma1, gamma2, c12}) *
         c.at({g, gamma1, gamma2}).conj();
}

Cochain random_cochain(const Groupoid& g, int arity, std::mt19937_64& rng, int max_den) {
  Cochain out(g, arity);
  std::uniform_int_distribution<int> den_dist(1, max_den);
  for (const auto& t : composable_tuples(g, arity)) {
    bool unit_leg = std::any_of(t.begin(), t.end(), [&](ElementId e) { return g.is_unit(e); });
    if (unit_leg) continue;
    int den = den_dist(rng);
    int num = std::uniform_int_distribution<int>(0, den - 1)(rng);
    out.set(std::span<const ElementId>(t.data(), t.size()), Phase::of(num, den));
  }
  return out;
}

Cochain multiply(const Cochain& a, const Cochain& b) {
  if (a.arity() != b.arity() || &a.groupoid() != &b.groupoid())
    throw std::invalid_argument("multiply: cochain shape mismatch");
  Cochain out = a;
  for (const auto& [t, v] : b.entries())
    out.set(std::span<const ElementId>(t.data(), t.size()),
            out.at(std::span<const ElementId>(t.data(), t.size())) * v);
  return out;
}

Cochain random_cocycle3(const Groupoid& g, std::mt19937_64& rng, const GroupCochain3* seed,
                        const std::vector<int>* hom) {
  Cochain c = coboundary(random_cochain(g, 2, rng));
  if (seed != nullptr && hom != nullptr) c = multiply(c, inflate(*seed, g, *hom));
  return c;
}

Cochain trivialize_principal(const Cochain& c) {
  const Groupoid& g = c.groupoid();
  if (c.arity() != 3) throw std::invalid_argument("trivialize_principal: arity must be 3");
  if (!g.transitive()) throw std::invalid_argument("trivialize_principal: groupoid not transitive");
  for (ElementId x : g.units())
    if ((int)g.isotropy(x).size() != 1)
      throw std::invalid_argument("trivialize_principal: groupoid not principal");
  ElementId base = g.units().front();
  // gamma_y = the arrow y <- base
  std::vector<ElementId> gamma(g.size(), -1);
  for (ElementId y : g.units()) gamma[y] = g.hom_set(y, base).front();
  Cochain b(g, 2);
  for (const auto& t : composable_tuples(g, 2)) {
    ElementId u = t[0], v = t[1];
    if (g.is_unit(u) || g.is_unit(v)) continue;
    b.set({u, v}, c.at({u, v, gamma[g.source(v)]}).conj());
  }
  return b;
}

}  // namespace gpd
