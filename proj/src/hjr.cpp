#include "gpd/hjr.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace gpd {

ElementId QuotientPresentation::n_of(int p, int qq) const {
  ElementId sp = section[p], sq = section[qq];
  ElementId spq = section[q.mult[p][qq]];
  return g->compose({sp, sq, g->inverse(spq)});
}

void QuotientPresentation::validate() const {
  if (g->units().size() != 1) throw std::invalid_argument("quotient: groupoid must be a group");
  for (int a = 0; a < g->size(); ++a)
    for (int b = 0; b < g->size(); ++b)
      if (pi[g->compose(a, b)] != q.mult[pi[a]][pi[b]])
        throw std::invalid_argument("quotient: pi is not a homomorphism");
  for (int p = 0; p < q.order; ++p) {
    if (pi[section[p]] != p) throw std::invalid_argument("quotient: bad section");
    for (int qq = 0; qq < q.order; ++qq)
      if (!in_n[n_of(p, qq)]) throw std::invalid_argument("quotient: n(p,q) escapes N");
  }
  // n(p,q) n(pq,r) = [s(p) n(q,r) s(p)^-1] n(p,qr)
  for (int p = 0; p < q.order; ++p)
    for (int qq = 0; qq < q.order; ++qq)
      for (int r = 0; r < q.order; ++r) {
        ElementId sp = section[p];
        ElementId lhs = g->compose(n_of(p, qq), n_of(q.mult[p][qq], r));
        ElementId rhs = g->compose(
            {sp, n_of(qq, r), g->inverse(sp), n_of(p, q.mult[qq][r])});
        if (lhs != rhs)
          throw std::invalid_argument("quotient: n(p,q) breaks the twisted cocycle law");
      }
}

QuotientPresentation make_quotient(const Groupoid& g, const NormalSubgroupoid& n) {
  if (g.units().size() != 1)
    throw std::invalid_argument("make_quotient: groupoid must have a single unit");
  n.validate();
  QuotientPresentation qp;
  qp.g = &g;
  qp.in_n.assign(g.size(), 0);
  for (int a = 0; a < g.size(); ++a) qp.in_n[a] = n.contains(a) ? 1 : 0;

  // cosets aN, indexed in order of their least element
  ElementId unit = g.units().front();
  std::vector<ElementId> nf = n.fiber(unit);
  std::vector<int> coset_of(g.size(), -1);
  std::vector<ElementId> least;
  for (ElementId a = 0; a < g.size(); ++a) {
    if (coset_of[a] >= 0) continue;
    int idx = (int)least.size();
    least.push_back(a);
    for (ElementId m : nf) coset_of[g.compose(a, m)] = idx;
  }
  const int ord = (int)least.size();
  qp.pi.assign(g.size(), 0);
  for (int a = 0; a < g.size(); ++a) qp.pi[a] = coset_of[a];
  qp.q.order = ord;
  qp.q.identity = coset_of[unit];
  qp.q.mult.assign(ord, std::vector<int>(ord));
  qp.q.inv.assign(ord, 0);
  for (int p = 0; p < ord; ++p) {
    qp.q.inv[p] = coset_of[g.inverse(least[p])];
    for (int qq = 0; qq < ord; ++qq)
      qp.q.mult[p][qq] = coset_of[g.compose(least[p], least[qq])];
  }
  qp.q.validate();
  qp.section.assign(ord, 0);
  for (int p = 0; p < ord; ++p) qp.section[p] = least[p];
  qp.section[qp.q.identity] = unit;
  qp.validate();
  return qp;
}

Phase scalar_lambda(const CoefficientBundle& b, const CharCocycle& chi, ElementId nn,
                    ElementId g) {
  return chi.lam_at(b, nn, g)[0];
}
Phase scalar_mu(const CoefficientBundle& b, const CharCocycle& chi, ElementId m, ElementId nn) {
  return chi.mu_at(b, m, nn)[0];
}

GroupCochain3 hjr_delta(const CoefficientBundle& b, const CharCocycle& chi,
                        const QuotientPresentation& qp) {
  const Groupoid& g = *qp.g;
  const int ord = qp.q.order;
  GroupCochain3 out;
  out.group = &qp.q;
  out.v.assign((size_t)ord * ord * ord, Phase::one());
  for (int p = 0; p < ord; ++p)
    for (int qq = 0; qq < ord; ++qq)
      for (int r = 0; r < ord; ++r) {
        ElementId sp = qp.section[p];
        ElementId conj_nqr = g.compose({sp, qp.n_of(qq, r), g.inverse(sp)});
        Phase val = scalar_lambda(b, chi, conj_nqr, sp) *
                    scalar_mu(b, chi, conj_nqr, qp.n_of(p, qp.q.mult[qq][r])) *
                    scalar_mu(b, chi, qp.n_of(p, qq), qp.n_of(qp.q.mult[p][qq], r)).conj();
        out.v[((size_t)p * ord + qq) * ord + r] = val;
      }
  return out;
}

Cochain lemma_a4_cochain(const CoefficientBundle& b, const CharCocycle& chi,
                         const QuotientPresentation& qp) {
  const Groupoid& g = *qp.g;
  Cochain a(g, 2);
  for (ElementId x = 0; x < g.size(); ++x)
    for (ElementId y = 0; y < g.size(); ++y) {
      if (g.is_unit(x) || g.is_unit(y)) continue;
      int p = qp.pi[x], q2 = qp.pi[y];
      ElementId sp = qp.section[p], sq = qp.section[q2];
      ElementId m = g.compose(x, g.inverse(sp));
      ElementId nn = g.compose(y, g.inverse(sq));
      ElementId conj_n = g.compose({sp, nn, g.inverse(sp)});
      Phase val = scalar_lambda(b, chi, conj_n, sp).conj() *
                  scalar_mu(b, chi, m, conj_n).conj() *
                  scalar_mu(b, chi, g.compose(m, conj_n), qp.n_of(p, q2)).conj();
      a.set({x, y}, val);
    }
  return a;
}

AppendixReport check_appendix(const CoefficientBundle& b, const CharCocycle& chi,
                              const Cochain& c, const QuotientPresentation& qp) {
  const Groupoid& g = *qp.g;
  const int ord = qp.q.order;
  AppendixReport rep;

  Cochain a = lemma_a4_cochain(b, chi, qp);
  Cochain da = coboundary(a);

  // route 1: descend c * conj(da) through pi
  std::vector<Phase> descended((size_t)ord * ord * ord, Phase::one());
  std::vector<char> seen(descended.size(), 0);
  rep.descent_ok = true;
  for (ElementId x = 0; x < g.size(); ++x)
    for (ElementId y = 0; y < g.size(); ++y)
      for (ElementId z = 0; z < g.size(); ++z) {
        Phase v = c.at({x, y, z}) * da.at({x, y, z}).conj();
        size_t idx = ((size_t)qp.pi[x] * ord + qp.pi[y]) * ord + qp.pi[z];
        if (!seen[idx]) {
          seen[idx] = 1;
          descended[idx] = v;
          ++rep.fibers_checked;
        } else if (descended[idx] != v) {
          rep.descent_ok = false;
          rep.detail = "descent fails at (" + std::to_string(x) + "," + std::to_string(y) +
                       "," + std::to_string(z) + ")";
        }
      }

  // route 2: the delta formula
  GroupCochain3 delta = hjr_delta(b, chi, qp);
  GroupCochain3 d1;
  d1.group = &qp.q;
  d1.v.assign(descended.size(), Phase::one());
  rep.a3_identity = true;
  for (int p = 0; p < ord; ++p)
    for (int qq = 0; qq < ord; ++qq)
      for (int r = 0; r < ord; ++r) {
        size_t idx = ((size_t)p * ord + qq) * ord + r;
        Phase formula =
            c.at({qp.section[p], qp.section[qq], qp.section[r]}) * delta.at(p, qq, r);
        d1.v[idx] = formula;
        if (rep.descent_ok && descended[idx] != formula) {
          rep.a3_identity = false;
          if (rep.detail.empty())
            rep.detail = "A3 mismatch at (" + std::to_string(p) + "," + std::to_string(qq) +
                         "," + std::to_string(r) + ")";
        }
      }
  if (!rep.descent_ok) rep.a3_identity = false;

  rep.d1_is_cocycle = d1.is_cocycle();

  // A4: c == da * pi^*(d1) entrywise; reconstruction passes check_cocycle3
  Cochain rec(g, 3);
  rep.a4_reconstruction = true;
  for (ElementId x = 0; x < g.size(); ++x)
    for (ElementId y = 0; y < g.size(); ++y)
      for (ElementId z = 0; z < g.size(); ++z) {
        Phase v = da.at({x, y, z}) * d1.at(qp.pi[x], qp.pi[y], qp.pi[z]);
        if (v != c.at({x, y, z})) {
          rep.a4_reconstruction = false;
          if (rep.detail.empty())
            rep.detail = "A4 mismatch at (" + std::to_string(x) + "," + std::to_string(y) +
                         "," + std::to_string(z) + ")";
        }
        if (!g.is_unit(x) && !g.is_unit(y) && !g.is_unit(z)) rec.set({x, y, z}, v);
      }
  rep.reconstruction_cocycle = check_cocycle3(rec).pass;
  return rep;
}

bool check_d1d2_cocycle(const CoefficientBundle& b, const CharCocycle& chi, const Cochain& c,
                        const QuotientPresentation& qp, int window) {
  const int ord = qp.q.order;
  GroupCochain3 delta = hjr_delta(b, chi, qp);
  auto d1 = [&](int p, int qq, int r) {
    return c.at({qp.section[p], qp.section[qq], qp.section[r]}) * delta.at(p, qq, r);
  };
  auto d2 = [&](int qq, int r, int s) {  // d(n(q,r), s), scalar fiber
    return chi.d_at(b, qp.n_of(qq, r), s)[0];
  };
  auto big = [&](int p, int s, int qq, int r) { return d1(p, qq, r) * d2(qq, r, s); };
  for (int p = 0; p < ord; ++p)
    for (int qq = 0; qq < ord; ++qq)
      for (int r = 0; r < ord; ++r)
        for (int v = 0; v < ord; ++v)
          for (int s = -window; s <= window; ++s)
            for (int t = -window; t <= window; ++t) {
              if (s + t < chi.t_min || s + t > chi.t_max) continue;
              if (s < chi.t_min || s > chi.t_max || t < chi.t_min || t > chi.t_max) continue;
              // D(A,B,C) conj(D(A,B,CE)) D(A,BC,E) conj(D(AB,C,E)) D(B,C,E) = 1
              // with A=(p,s), B=(qq,t), C=(r,.), E=(v,.)
              Phase lhs = big(p, s, qq, r) * big(p, s, qq, qp.q.mult[r][v]).conj() *
                          big(p, s, qp.q.mult[qq][r], v) *
                          big(qp.q.mult[p][qq], s + t, r, v).conj() * big(qq, t, r, v);
              if (!lhs.is_one()) return false;
            }
  return true;
}

}  // namespace gpd
