#include "gpd/char_cocycle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gpd {

namespace {
std::string tuple_str(std::initializer_list<std::pair<const char*, long>> kv) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) os << ",";
    os << k << "=" << v;
    first = false;
  }
  os << ")";
  return os.str();
}
}  // namespace

CoefficientBundle CoefficientBundle::scalar(const Groupoid& g) {
  CoefficientBundle b;
  b.g = &g;
  b.fiber_size.assign(g.size(), 1);
  b.theta.assign(g.size(), {0});
  b.beta.assign(g.size(), {0});
  return b;
}

void CoefficientBundle::validate() const {
  for (ElementId x : g->units()) {
    int m = fiber_size[x];
    if (m < 1) throw std::invalid_argument("bundle: empty fiber at " + std::to_string(x));
    std::vector<char> seen(m, 0);
    if ((int)theta[x].size() != m)
      throw std::invalid_argument("bundle: theta size at " + std::to_string(x));
    for (int p : theta[x]) {
      if (p < 0 || p >= m || seen[p])
        throw std::invalid_argument("bundle: theta not a permutation at " + std::to_string(x));
      seen[p] = 1;
    }
  }
  for (int a = 0; a < g->size(); ++a) {
    int ms = fiber_size[g->source(a)], mr = fiber_size[g->range(a)];
    if ((int)beta[a].size() != ms || ms != mr)
      throw std::invalid_argument("bundle: beta shape at arrow " + std::to_string(a));
    std::vector<char> seen(mr, 0);
    for (int p : beta[a]) {
      if (p < 0 || p >= mr || seen[p])
        throw std::invalid_argument("bundle: beta not a bijection at arrow " + std::to_string(a));
      seen[p] = 1;
    }
    if (g->is_unit(a))
      for (int i = 0; i < ms; ++i)
        if (beta[a][i] != i)
          throw std::invalid_argument("bundle: beta at a unit is not the identity");
    // beta commutes with theta
    for (int i = 0; i < ms; ++i)
      if (beta[a][theta[g->source(a)][i]] != theta[g->range(a)][beta[a][i]])
        throw std::invalid_argument("bundle: beta does not commute with theta at arrow " +
                                    std::to_string(a));
  }
  for (const auto& t : composable_tuples(*g, 2)) {
    ElementId gh = g->compose(t[0], t[1]);
    for (int i = 0; i < fiber_size[g->source(t[1])]; ++i)
      if (beta[gh][i] != beta[t[0]][beta[t[1]][i]])
        throw std::invalid_argument("bundle: beta is not functorial at (" +
                                    std::to_string(t[0]) + "," + std::to_string(t[1]) + ")");
  }
}

BundleUnitary CoefficientBundle::apply_theta(ElementId x, int t, const BundleUnitary& u) const {
  const auto& perm = theta[x];
  const int m = (int)perm.size();
  std::vector<int> inv(m);
  for (int i = 0; i < m; ++i) inv[perm[i]] = i;
  // (theta_t u)(omega) = u(theta^{-t}(omega))
  BundleUnitary out = u;
  const std::vector<int>& step = (t >= 0) ? inv : perm;
  int reps = t >= 0 ? t : -t;
  for (int r = 0; r < reps; ++r) {
    BundleUnitary nxt(m, Phase::one());
    for (int i = 0; i < m; ++i) nxt[i] = out[step[i]];
    out = nxt;
  }
  return out;
}

BundleUnitary CoefficientBundle::apply_beta(ElementId arrow, const BundleUnitary& u) const {
  const auto& map = beta[arrow];
  const int m = (int)map.size();
  std::vector<int> inv(m);
  for (int i = 0; i < m; ++i) inv[map[i]] = i;
  BundleUnitary out(m, Phase::one());
  for (int i = 0; i < m; ++i) out[i] = u[inv[i]];
  return out;
}

BundleUnitary bu_mul(const BundleUnitary& a, const BundleUnitary& b) {
  BundleUnitary out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}
BundleUnitary bu_conj(const BundleUnitary& a) {
  BundleUnitary out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i].conj();
  return out;
}
BundleUnitary bu_scale(const BundleUnitary& a, const Phase& p) {
  BundleUnitary out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * p;
  return out;
}
bool bu_is_one(const BundleUnitary& a) {
  return std::all_of(a.begin(), a.end(), [](const Phase& p) { return p.is_one(); });
}

std::vector<ElementId> NormalSubgroupoid::fiber(ElementId x) const {
  std::vector<ElementId> out;
  for (ElementId a : g->isotropy(x))
    if (member[a]) out.push_back(a);
  return out;
}

void NormalSubgroupoid::validate() const {
  for (int a = 0; a < g->size(); ++a)
    if (member[a] && g->source(a) != g->range(a))
      throw std::invalid_argument("N: member " + std::to_string(a) + " is not isotropy");
  for (ElementId x : g->units()) {
    if (!member[x]) throw std::invalid_argument("N: missing unit " + std::to_string(x));
    auto f = fiber(x);
    for (ElementId a : f) {
      if (!member[g->inverse(a)]) throw std::invalid_argument("N: not inverse-closed");
      for (ElementId b : f)
        if (!member[g->compose(a, b)]) throw std::invalid_argument("N: not composition-closed");
    }
  }
  for (int a = 0; a < g->size(); ++a)
    for (ElementId n : fiber(g->source(a)))
      if (!member[g->compose({a, n, g->inverse(a)})])
        throw std::invalid_argument("N: not conjugation-stable at arrow " + std::to_string(a));
}

BundleUnitary CharCocycle::lam_at(const CoefficientBundle& b, ElementId nn, ElementId g) const {
  if (b.g->is_unit(nn) || b.g->is_unit(g)) return b.one(b.g->range(g));
  auto it = lambda.find({nn, g});
  return it == lambda.end() ? b.one(b.g->range(g)) : it->second;
}

BundleUnitary CharCocycle::mu_at(const CoefficientBundle& b, ElementId m, ElementId nn) const {
  if (b.g->is_unit(m) || b.g->is_unit(nn)) return b.one(b.g->range(m));
  auto it = mu.find({m, nn});
  return it == mu.end() ? b.one(b.g->range(m)) : it->second;
}

BundleUnitary CharCocycle::d_at(const CoefficientBundle& b, ElementId nn, int t) const {
  if (b.g->is_unit(nn) || t == 0) return b.one(b.g->range(nn));
  if (t < t_min || t > t_max) throw std::invalid_argument("d: t outside tabulated window");
  auto it = d.find({nn, t});
  return it == d.end() ? b.one(b.g->range(nn)) : it->second;
}

CharCocycle CharCocycle::trivial(const NormalSubgroupoid& n) {
  CharCocycle chi;
  chi.n = n;
  return chi;
}

void CharCocycle::generate_d(const CoefficientBundle& b,
                             const std::map<ElementId, BundleUnitary>& d_gen) {
  d.clear();
  for (ElementId x : b.g->units())
    for (ElementId nn : n.fiber(x)) {
      if (b.g->is_unit(nn)) continue;
      BundleUnitary g1 = b.one(x);
      if (auto it = d_gen.find(nn); it != d_gen.end()) g1 = it->second;
      // d(n, t+1) = theta_t(d(n,1)) d(n,t)
      BundleUnitary cur = b.one(x);
      for (int t = 0; t < t_max; ++t) {
        cur = bu_mul(b.apply_theta(x, t, g1), cur);
        d[{nn, t + 1}] = cur;
      }
      // d(n, t-1) = theta_{t-1}(d(n,1))^* d(n,t)
      cur = b.one(x);
      for (int t = 0; t > t_min; --t) {
        cur = bu_mul(bu_conj(b.apply_theta(x, t - 1, g1)), cur);
        d[{nn, t - 1}] = cur;
      }
    }
}

CCReport check_CC(const CoefficientBundle& b, const CharCocycle& chi, const Cochain& c) {
  const Groupoid& g = *b.g;
  if (&c.groupoid() != &g) throw std::invalid_argument("check_CC: groupoid mismatch");
  chi.n.validate();
  CCReport rep;
  rep.relations.assign(7, {});
  for (int i = 0; i < 7; ++i) rep.relations[i].relation = "CC" + std::to_string(i + 1);

  auto record = [&](int idx, bool ok, const std::string& where) {
    auto& r = rep.relations[idx - 1];
    ++r.cases;
    if (!ok && r.pass) {
      r.pass = false;
      r.first_violation = where;
    }
  };

  // CC1: lambda(n,g)^* theta_t(lambda(n,g)) = d(n,t)^* beta_g(d(g^-1ng, t))
  for (int a = 0; a < g.size(); ++a) {
    ElementId y = g.range(a), x = g.source(a);
    for (ElementId nn : chi.n.fiber(y)) {
      ElementId cn = g.compose({g.inverse(a), nn, a});
      for (int t = chi.t_min; t <= chi.t_max; ++t) {
        BundleUnitary lam = chi.lam_at(b, nn, a);
        BundleUnitary lhs = bu_mul(bu_conj(lam), b.apply_theta(y, t, lam));
        BundleUnitary rhs =
            bu_mul(bu_conj(chi.d_at(b, nn, t)), b.apply_beta(a, chi.d_at(b, cn, t)));
        (void)x;
        record(1, lhs == rhs, tuple_str({{"n", nn}, {"g", a}, {"t", t}}));
      }
    }
  }
  // CC2: d(m,t) d(n,t) d(mn,t)^* = mu(m,n)^* theta_t(mu(m,n))
  for (ElementId x : g.units())
    for (ElementId m : chi.n.fiber(x))
      for (ElementId nn : chi.n.fiber(x))
        for (int t = chi.t_min; t <= chi.t_max; ++t) {
          BundleUnitary lhs = bu_mul(bu_mul(chi.d_at(b, m, t), chi.d_at(b, nn, t)),
                                     bu_conj(chi.d_at(b, g.compose(m, nn), t)));
          BundleUnitary mu = chi.mu_at(b, m, nn);
          BundleUnitary rhs = bu_mul(bu_conj(mu), b.apply_theta(x, t, mu));
          record(2, lhs == rhs, tuple_str({{"m", m}, {"n", nn}, {"t", t}}));
        }
  // CC3: mu(l,m) mu(lm,n) = c(l,m,n) mu(m,n) mu(l,mn)
  for (ElementId x : g.units()) {
    auto nf = chi.n.fiber(x);
    for (ElementId l : nf)
      for (ElementId m : nf)
        for (ElementId nn : nf) {
          BundleUnitary lhs =
              bu_mul(chi.mu_at(b, l, m), chi.mu_at(b, g.compose(l, m), nn));
          BundleUnitary rhs = bu_scale(
              bu_mul(chi.mu_at(b, m, nn), chi.mu_at(b, l, g.compose(m, nn))),
              c.at({l, m, nn}));
          record(3, lhs == rhs, tuple_str({{"l", l}, {"m", m}, {"n", nn}}));
        }
  }
  // CC4: lambda(n,gh) = beta_g(lambda(g^-1ng,h)) lambda(n,g)
  //      * conj(c(g,g^-1ng,h)) c(n,g,h) c(g,h,h^-1g^-1ngh)
  for (const auto& t2 : composable_tuples(g, 2)) {
    ElementId a = t2[0], h = t2[1];
    ElementId gh = g.compose(a, h);
    for (ElementId nn : chi.n.fiber(g.range(a))) {
      ElementId cn = g.compose({g.inverse(a), nn, a});
      ElementId cnh = g.compose({g.inverse(h), cn, h});
      BundleUnitary lhs = chi.lam_at(b, nn, gh);
      Phase scal = c.at({a, cn, h}).conj() * c.at({nn, a, h}) * c.at({a, h, cnh});
      BundleUnitary rhs = bu_scale(
          bu_mul(b.apply_beta(a, chi.lam_at(b, cn, h)), chi.lam_at(b, nn, a)), scal);
      record(4, lhs == rhs, tuple_str({{"n", nn}, {"g", a}, {"h", h}}));
    }
  }
  // CC5: lambda(mn,g) lambda(m,g)^* lambda(n,g)^* =
  //      mu(m,n) beta_g(mu(g^-1mg,g^-1ng)^*) c(m,g,g^-1ng) conj(c(g,g^-1mg,g^-1ng) c(m,n,g))
  for (int a = 0; a < g.size(); ++a) {
    ElementId y = g.range(a);
    for (ElementId m : chi.n.fiber(y))
      for (ElementId nn : chi.n.fiber(y)) {
        ElementId cm = g.compose({g.inverse(a), m, a});
        ElementId cn = g.compose({g.inverse(a), nn, a});
        BundleUnitary lhs = bu_mul(
            bu_mul(chi.lam_at(b, g.compose(m, nn), a), bu_conj(chi.lam_at(b, m, a))),
            bu_conj(chi.lam_at(b, nn, a)));
        Phase scal =
            c.at({m, a, cn}) * c.at({a, cm, cn}).conj() * c.at({m, nn, a}).conj();
        BundleUnitary rhs = bu_scale(
            bu_mul(chi.mu_at(b, m, nn), b.apply_beta(a, bu_conj(chi.mu_at(b, cm, cn)))),
            scal);
        record(5, lhs == rhs, tuple_str({{"m", m}, {"n", nn}, {"g", a}}));
      }
  }
  // CC6: lambda(n,m) = mu(m, m^-1nm) mu(n,m)^*
  for (ElementId x : g.units()) {
    auto nf = chi.n.fiber(x);
    for (ElementId nn : nf)
      for (ElementId m : nf) {
        ElementId cn = g.compose({g.inverse(m), nn, m});
        BundleUnitary lhs = chi.lam_at(b, nn, m);
        BundleUnitary rhs = bu_mul(chi.mu_at(b, m, cn), bu_conj(chi.mu_at(b, nn, m)));
        record(6, lhs == rhs, tuple_str({{"n", nn}, {"m", m}}));
      }
  }
  // CC7: d(n,t+s) = theta_t(d(n,s)) d(n,t)
  for (ElementId x : g.units())
    for (ElementId nn : chi.n.fiber(x))
      for (int t = chi.t_min; t <= chi.t_max; ++t)
        for (int s = chi.t_min; s <= chi.t_max; ++s) {
          if (t + s < chi.t_min || t + s > chi.t_max) continue;
          BundleUnitary lhs = chi.d_at(b, nn, t + s);
          BundleUnitary rhs =
              bu_mul(b.apply_theta(x, t, chi.d_at(b, nn, s)), chi.d_at(b, nn, t));
          record(7, lhs == rhs, tuple_str({{"n", nn}, {"t", t}, {"s", s}}));
        }
  return rep;
}

bool CCReport::all_pass() const {
  return std::all_of(relations.begin(), relations.end(),
                     [](const RelationVerdict& r) { return r.pass; });
}

CharCocycle coboundary_perturb(const CoefficientBundle& b, const CharCocycle& chi,
                               const std::map<ElementId, BundleUnitary>& z) {
  const Groupoid& g = *b.g;
  auto z_at = [&](ElementId nn) -> BundleUnitary {
    if (g.is_unit(nn)) return b.one(nn);
    auto it = z.find(nn);
    return it == z.end() ? b.one(g.range(nn)) : it->second;
  };
  CharCocycle out;
  out.n = chi.n;
  out.t_min = chi.t_min;
  out.t_max = chi.t_max;
  for (int a = 0; a < g.size(); ++a) {
    ElementId y = g.range(a);
    for (ElementId nn : out.n.fiber(y)) {
      if (g.is_unit(nn) || g.is_unit(a)) continue;
      ElementId cn = g.compose({g.inverse(a), nn, a});
      BundleUnitary v = bu_mul(bu_mul(b.apply_beta(a, z_at(cn)), chi.lam_at(b, nn, a)),
                               bu_conj(z_at(nn)));
      if (!bu_is_one(v)) out.lambda[{nn, a}] = v;
    }
  }
  for (ElementId x : g.units())
    for (ElementId m : out.n.fiber(x))
      for (ElementId nn : out.n.fiber(x)) {
        if (g.is_unit(m) || g.is_unit(nn)) continue;
        BundleUnitary v = bu_mul(bu_mul(bu_mul(z_at(m), z_at(nn)), chi.mu_at(b, m, nn)),
                                 bu_conj(z_at(g.compose(m, nn))));
        if (!bu_is_one(v)) out.mu[{m, nn}] = v;
      }
  for (ElementId x : g.units())
    for (ElementId nn : out.n.fiber(x)) {
      if (g.is_unit(nn)) continue;
      for (int t = chi.t_min; t <= chi.t_max; ++t) {
        if (t == 0) continue;
        BundleUnitary v = bu_mul(
            bu_mul(b.apply_theta(x, t, z_at(nn)), chi.d_at(b, nn, t)), bu_conj(z_at(nn)));
        out.d[{nn, t}] = v;
      }
    }
  return out;
}

std::vector<CharCocycle> search_scalar_solutions(const CoefficientBundle& b,
                                                 const NormalSubgroupoid& n, const Cochain& c,
                                                 int root_order, bool with_d) {
  const Groupoid& g = *b.g;
  for (ElementId x : g.units())
    if (b.fiber_size[x] != 1)
      throw std::invalid_argument("search_scalar_solutions: bundle must have scalar fibers");
  // free slots
  std::vector<std::pair<ElementId, ElementId>> lam_slots, mu_slots;
  std::vector<ElementId> d_slots;
  for (int a = 0; a < g.size(); ++a) {
    if (g.is_unit(a)) continue;
    for (ElementId nn : n.fiber(g.range(a)))
      if (!g.is_unit(nn)) lam_slots.push_back({nn, a});
  }
  for (ElementId x : g.units())
    for (ElementId m : n.fiber(x))
      for (ElementId nn : n.fiber(x))
        if (!g.is_unit(m) && !g.is_unit(nn)) mu_slots.push_back({m, nn});
  for (ElementId x : g.units())
    for (ElementId nn : n.fiber(x))
      if (!g.is_unit(nn)) d_slots.push_back(nn);

  const size_t total_slots = lam_slots.size() + mu_slots.size();
  double space = 1;
  for (size_t i = 0; i < total_slots; ++i) space *= root_order;
  if (space > 1e7)
    throw std::invalid_argument("search_scalar_solutions: search space exceeds cap");

  std::vector<CharCocycle> found;
  std::vector<int> assign(total_slots, 0);
  auto build = [&]() {
    CharCocycle chi;
    chi.n = n;
    for (size_t i = 0; i < lam_slots.size(); ++i)
      if (assign[i] != 0) chi.lambda[lam_slots[i]] = {Phase::of(assign[i], root_order)};
    for (size_t i = 0; i < mu_slots.size(); ++i)
      if (assign[lam_slots.size() + i] != 0)
        chi.mu[mu_slots[i]] = {Phase::of(assign[lam_slots.size() + i], root_order)};
    return chi;
  };
  while (true) {
    CharCocycle chi = build();
    CCReport rep = check_CC(b, chi, c);
    if (rep.at(3).pass && rep.at(4).pass && rep.at(5).pass && rep.at(6).pass) {
      if (!with_d) {
        found.push_back(chi);
      } else {
        // extend by all d-generators; for scalar fibers theta acts trivially
        std::vector<int> dassign(d_slots.size(), 0);
        while (true) {
          CharCocycle ext = chi;
          std::map<ElementId, BundleUnitary> gen;
          for (size_t i = 0; i < d_slots.size(); ++i)
            gen[d_slots[i]] = {Phase::of(dassign[i], root_order)};
          ext.generate_d(b, gen);
          CCReport r2 = check_CC(b, ext, c);
          if (r2.at(1).pass && r2.at(2).pass && r2.at(7).pass) found.push_back(ext);
          size_t j = 0;
          while (j < dassign.size() && ++dassign[j] == root_order) dassign[j++] = 0;
          if (j == dassign.size()) break;
        }
      }
    }
    size_t j = 0;
    while (j < assign.size() && ++assign[j] == root_order) assign[j++] = 0;
    if (j == assign.size()) break;
  }
  return found;
}

}  // namespace gpd
