#include <cstdio>
#include <memory>
#include <random>

#include "gpd/model.hpp"

using namespace gpd;

int main() {
  auto z2 = CayleyGroup::cyclic(2);
  Groupoid g = make_product(make_group_bundle(1, z2), make_pair_groupoid(2));
  auto labels = product_first_factor_labels(bundle_labels(1, z2), 4);
  std::mt19937_64 rng(99);
  Cochain c = multiply(inflate(cyclic_cocycle3(z2, 1), g, labels),
                       coboundary(random_cochain(g, 2, rng)));
  model::Context ctx(g, c);
  SemidirectPresentation sect = semidirect(g);
  int n = 1;

  ElementId z = g.units()[0], y = g.units()[1], x = g.units()[0];
  ElementId g1 = sect.sigma(z, y), g2 = sect.sigma(y, x);
  ElementId g12 = g.compose(g1, g2);
  for (ElementId iso : g.isotropy(z)) {
    ElementId cg = g.compose({g.inverse(g1), iso, g1});
    auto lhs = model::multiply(model::alpha(ctx, g1, model::v_element(ctx, n, cg, g2)),
                               model::v_element(ctx, n, iso, g1));
    auto rhs0 = model::v_element(ctx, n, iso, g12);
    auto ratio = model::multiply(lhs, model::adjoint(rhs0));
    Phase e = eta(c, g1, g2, iso);
    std::printf("iso=%d eta_paper=%s\n", iso, e.str().c_str());
    for (auto& [k, m] : ratio.block) {
      std::printf("  block k=%d diag:", k);
      for (int i = 0; i < m.rows(); ++i)
        std::printf(" (%.4f,%.4f)", m(i, i).real(), m(i, i).imag());
      std::printf("\n");
      // compare against my symbolic T(q) guess per path
      const auto& ps = ctx.paths(g.range(k), g.source(k), n);
      ElementId gam = g1, del = g2;
      ElementId gpp = g.compose({g.inverse(g2), cg, g2});
      for (int i = 0; i < ps.dim(); ++i) {
        ElementId s1 = ps.paths[i][0];
        ElementId p = g.compose({g.inverse(gam), g.inverse(iso), s1});
        ElementId q = g.compose(g.inverse(del), p);
        Phase T = c.at({gam, del, gpp}) * c.at({gam, del, g.compose(gpp, q)}).conj() *
                  c.at({gam, cg, del}).conj() * c.at({iso, gam, del}) * c.at({gam, del, q});
        std::printf("    path %d: T=%s\n", i, T.str().c_str());
      }
    }
  }
  return 0;
}
