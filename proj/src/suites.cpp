#include "gpd/suites.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "gpd/hjr.hpp"
#include "gpd/model.hpp"

namespace gpd::suites {

namespace {

CheckLine exact_line(const std::string& name, bool pass, long cases,
                     const std::string& worst = "") {
  CheckLine l;
  l.name = name;
  l.exact = true;
  l.pass = pass;
  l.cases = cases;
  l.worst = worst;
  return l;
}

CheckLine residual_line(const std::string& name, double residual, double tol, long cases,
                        const std::string& worst = "") {
  CheckLine l;
  l.name = name;
  l.residual = residual;
  l.tolerance = tol;
  l.pass = residual <= tol;
  l.cases = cases;
  l.worst = worst;
  return l;
}

CheckLine from_check(const model::CheckResult& c, double tol) {
  return residual_line(c.name, c.max_residual, tol, c.cases, c.worst);
}

MeasureFamily<Rat> random_rational_measure(const Groupoid& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> numer(1, 8);
  std::vector<Rat> w(g.size(), Rat(0));
  for (ElementId x : g.units()) {
    Rat total(0);
    std::vector<Rat> raw;
    for (ElementId a : g.range_fiber(x)) {
      raw.push_back(Rat(numer(rng)));
      total += raw.back();
    }
    size_t i = 0;
    for (ElementId a : g.range_fiber(x)) w[a] = raw[i++] / total;
  }
  return MeasureFamily<Rat>(g, std::move(w));
}

FiberFunction<Rat> random_rational_function(const Groupoid& g, ElementId x,
                                            std::mt19937_64& rng, bool nonneg) {
  std::uniform_int_distribution<int> numer(nonneg ? 0 : -8, 8);
  std::uniform_int_distribution<int> denom(1, 8);
  FiberFunction<Rat> f;
  f.x = x;
  for (size_t i = 0; i < g.range_fiber(x).size(); ++i)
    f.v.push_back(Rat(numer(rng), denom(rng)));
  return f;
}

ElementId random_unit(const Groupoid& g, std::mt19937_64& rng) {
  const auto& u = g.units();
  return u[std::uniform_int_distribution<size_t>(0, u.size() - 1)(rng)];
}

std::shared_ptr<Cochain> make_trivial_cocycle(std::shared_ptr<const Groupoid> g) {
  return std::make_shared<Cochain>(*g, 3);
}

// weights for the bundled "perturbed" measures, chosen with spectral gap
// about 1/5 so depth-12 profiles land well under 1e-6
std::shared_ptr<MeasureFamily<Rat>> perturbed_pair_measure(std::shared_ptr<const Groupoid> g,
                                                           int m) {
  // mu^x((x,y)) = 4/(5m) + 1/5 [y = x]; the diagonal arrows are the units
  std::vector<Rat> w(g->size(), Rat(0));
  for (ElementId x : g->units())
    for (ElementId a : g->range_fiber(x)) {
      w[a] = Rat(4, 5 * (std::int64_t)m);
      if (g->is_unit(a)) w[a] += Rat(1, 5);
    }
  return std::make_shared<MeasureFamily<Rat>>(*g, std::move(w));
}

std::shared_ptr<MeasureFamily<Rat>> label_weighted_measure(
    std::shared_ptr<const Groupoid> g, const std::vector<int>& labels,
    const std::vector<Rat>& weight_by_label) {
  std::vector<Rat> w(g->size(), Rat(0));
  for (int a = 0; a < g->size(); ++a) w[a] = weight_by_label[labels[a]];
  return std::make_shared<MeasureFamily<Rat>>(*g, std::move(w));
}

std::vector<BundledExample> build_corpus() {
  std::vector<BundledExample> out;

  auto add_pair = [&](int m) {
    BundledExample e;
    e.name = "pair" + std::to_string(m);
    e.g = std::make_shared<Groupoid>(make_pair_groupoid(m));
    e.uniform = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*e.g));
    e.perturbed = perturbed_pair_measure(e.g, m);
    e.trivial_c = make_trivial_cocycle(e.g);
    e.model_scale = m <= 3;
    out.push_back(std::move(e));
  };
  add_pair(2);
  add_pair(3);

  auto add_cyclic = [&](int k, std::vector<Rat> weight_by_label) {
    BundledExample e;
    e.name = "z" + std::to_string(k);
    auto zk = CayleyGroup::cyclic(k);
    e.g = std::make_shared<Groupoid>(make_group_bundle(1, zk));
    e.hom_labels = bundle_labels(1, zk);
    e.hom_order = k;
    e.uniform = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*e.g));
    e.perturbed = label_weighted_measure(e.g, e.hom_labels, weight_by_label);
    e.trivial_c = make_trivial_cocycle(e.g);
    e.inflated_c =
        std::make_shared<Cochain>(inflate(cyclic_cocycle3(zk, 1), *e.g, e.hom_labels));
    e.model_scale = true;
    out.push_back(std::move(e));
  };
  add_cyclic(2, {Rat(3, 5), Rat(2, 5)});
  add_cyclic(3, {Rat(2, 4), Rat(1, 4), Rat(1, 4)});
  add_cyclic(4, {Rat(2, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5)});

  {  // Z/4 acting on itself by translation
    BundledExample e;
    e.name = "z4onz4";
    auto z4 = CayleyGroup::cyclic(4);
    std::vector<std::vector<int>> act(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
      for (int x = 0; x < 4; ++x) act[a][x] = (a + x) % 4;
    e.g = std::make_shared<Groupoid>(make_transformation_groupoid(z4, act));
    e.hom_labels = transformation_labels(z4, 4);
    e.hom_order = 4;
    e.uniform = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*e.g));
    e.perturbed = label_weighted_measure(e.g, e.hom_labels,
                                         {Rat(2, 5), Rat(1, 5), Rat(1, 5), Rat(1, 5)});
    e.trivial_c = make_trivial_cocycle(e.g);
    e.inflated_c =
        std::make_shared<Cochain>(inflate(cyclic_cocycle3(z4, 1), *e.g, e.hom_labels));
    e.model_scale = false;  // 16 arrows
    out.push_back(std::move(e));
  }

  {  // Z/2 swapping two points
    BundledExample e;
    e.name = "z2swap";
    auto z2 = CayleyGroup::cyclic(2);
    std::vector<std::vector<int>> act = {{0, 1}, {1, 0}};
    e.g = std::make_shared<Groupoid>(make_transformation_groupoid(z2, act));
    e.hom_labels = transformation_labels(z2, 2);
    e.hom_order = 2;
    e.uniform = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*e.g));
    e.perturbed = label_weighted_measure(e.g, e.hom_labels, {Rat(3, 5), Rat(2, 5)});
    e.trivial_c = make_trivial_cocycle(e.g);
    e.inflated_c =
        std::make_shared<Cochain>(inflate(cyclic_cocycle3(z2, 1), *e.g, e.hom_labels));
    e.model_scale = true;
    out.push_back(std::move(e));
  }

  {  // product of a Z/2 point group and the pair groupoid on 2 points:
     // nontrivial isotropy and nontrivial orbit relation at once
    BundledExample e;
    e.name = "z2xpair2";
    auto z2 = CayleyGroup::cyclic(2);
    Groupoid zb = make_group_bundle(1, z2);
    Groupoid pr = make_pair_groupoid(2);
    e.g = std::make_shared<Groupoid>(make_product(zb, pr));
    e.hom_labels = product_first_factor_labels(bundle_labels(1, z2), pr.size());
    e.hom_order = 2;
    e.uniform = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*e.g));
    // weight by (epsilon, stay/move): flip probability exactly 1/2 so the
    // isotropy coordinate mixes immediately, 3/10 vs 2/10 on the base
    {
      std::vector<Rat> w(e.g->size(), Rat(0));
      for (int a = 0; a < e.g->size(); ++a) {
        int eps = e.hom_labels[a];
        bool stay = e.g->source(a) == e.g->range(a);
        if (eps == 0)
          w[a] = stay ? Rat(3, 10) : Rat(2, 10);
        else
          w[a] = stay ? Rat(2, 10) : Rat(3, 10);
      }
      e.perturbed = std::make_shared<MeasureFamily<Rat>>(*e.g, std::move(w));
    }
    e.trivial_c = make_trivial_cocycle(e.g);
    e.inflated_c =
        std::make_shared<Cochain>(inflate(cyclic_cocycle3(z2, 1), *e.g, e.hom_labels));
    e.model_scale = true;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

bool SuiteResult::pass() const {
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

bool Report::pass() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const SuiteResult& s) { return s.pass(); });
}

const std::vector<BundledExample>& bundled_examples() {
  static const std::vector<BundledExample> corpus = build_corpus();
  return corpus;
}

Instance generate_instance(const std::string& spec) {
  auto fail = [&]() {
    throw std::invalid_argument("unknown --generate spec '" + spec +
                                "' (try pair:3, cyclic:4, bundle:2,3, translation:4, swap2, "
                                "z2xpair:2)");
  };
  std::string kind = spec, arg;
  if (auto pos = spec.find(':'); pos != std::string::npos) {
    kind = spec.substr(0, pos);
    arg = spec.substr(pos + 1);
  }
  Instance inst;
  inst.name = spec;
  auto finish = [&](Groupoid g) {
    inst.g = std::make_shared<Groupoid>(std::move(g));
    inst.cocycle = std::make_shared<Cochain>(*inst.g, 3);
    inst.measure = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*inst.g));
  };
  if (kind == "pair") {
    finish(make_pair_groupoid(std::stoi(arg)));
  } else if (kind == "cyclic") {
    int k = std::stoi(arg);
    finish(make_group_bundle(1, CayleyGroup::cyclic(k)));
    inst.hom_labels = bundle_labels(1, CayleyGroup::cyclic(k));
    inst.hom_order = k;
  } else if (kind == "bundle") {
    auto comma = arg.find(',');
    if (comma == std::string::npos) fail();
    int pts = std::stoi(arg.substr(0, comma)), k = std::stoi(arg.substr(comma + 1));
    finish(make_group_bundle(pts, CayleyGroup::cyclic(k)));
    inst.hom_labels = bundle_labels(pts, CayleyGroup::cyclic(k));
    inst.hom_order = k;
  } else if (kind == "translation") {
    int k = std::stoi(arg);
    auto zk = CayleyGroup::cyclic(k);
    std::vector<std::vector<int>> act(k, std::vector<int>(k));
    for (int a = 0; a < k; ++a)
      for (int x = 0; x < k; ++x) act[a][x] = (a + x) % k;
    finish(make_transformation_groupoid(zk, act));
    inst.hom_labels = transformation_labels(zk, k);
    inst.hom_order = k;
  } else if (kind == "swap2") {
    auto z2 = CayleyGroup::cyclic(2);
    finish(make_transformation_groupoid(z2, {{0, 1}, {1, 0}}));
    inst.hom_labels = transformation_labels(z2, 2);
    inst.hom_order = 2;
  } else if (kind == "z2xpair") {
    int m = std::stoi(arg);
    auto z2 = CayleyGroup::cyclic(2);
    Groupoid zb = make_group_bundle(1, z2);
    Groupoid pr = make_pair_groupoid(m);
    finish(make_product(zb, pr));
    inst.hom_labels = product_first_factor_labels(bundle_labels(1, z2), pr.size());
    inst.hom_order = 2;
  } else {
    fail();
  }
  return inst;
}

Instance make_instance(const RunConfig& cfg) {
  Instance inst;
  if (!cfg.generate.empty()) {
    inst = generate_instance(cfg.generate);
  } else if (!cfg.input.empty()) {
    inst.name = cfg.input;
    inst.g = std::make_shared<Groupoid>(io::groupoid_from_json(io::load_json_file(cfg.input)));
    inst.cocycle = std::make_shared<Cochain>(*inst.g, 3);
    inst.measure = std::make_shared<MeasureFamily<Rat>>(MeasureFamily<Rat>::uniform(*inst.g));
  } else {
    throw std::invalid_argument("run: need --input or --generate");
  }
  if (!cfg.cochain_input.empty())
    inst.cocycle = std::make_shared<Cochain>(
        io::cochain_from_json(io::load_json_file(cfg.cochain_input), *inst.g, 3));
  if (!cfg.measure_input.empty())
    inst.measure = std::make_shared<MeasureFamily<Rat>>(
        io::measure_from_json(io::load_json_file(cfg.measure_input), *inst.g));
  return inst;
}

std::vector<std::string> emit_examples(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const io::json& j) {
    std::string path = (fs::path(dir) / name).string();
    io::save_json_file(path, j);
    written.push_back(path);
  };
  for (const auto& e : bundled_examples()) {
    put(e.name + ".groupoid.json", io::groupoid_to_json(*e.g));
    put(e.name + ".uniform.measure.json", io::measure_to_json(*e.uniform));
    put(e.name + ".perturbed.measure.json", io::measure_to_json(*e.perturbed));
    put(e.name + ".trivial.cocycle.json", io::cochain_to_json(*e.trivial_c));
    if (e.inflated_c) put(e.name + ".generator.cocycle.json", io::cochain_to_json(*e.inflated_c));
  }
  return written;
}

SuiteResult suite_axioms(const Instance& inst) {
  SuiteResult res;
  res.name = "axioms";
  ValidationReport rep = validate(*inst.g);
  res.checks.push_back(exact_line("groupoid axioms", rep.ok(), inst.g->size(), rep.str()));
  // |G^{x,(n)}| matches the recursive fiber count
  bool count_ok = true;
  long cases = 0;
  for (int n = 2; n <= 3; ++n)
    for (ElementId x : inst.g->units()) {
      TupleConstraints tc;
      tc.range_unit = x;
      size_t direct = composable_tuples(*inst.g, n, tc).size();
      size_t recursive = 0;
      for (ElementId t1 : inst.g->range_fiber(x)) {
        TupleConstraints tc2;
        tc2.range_unit = inst.g->source(t1);
        recursive += composable_tuples(*inst.g, n - 1, tc2).size();
      }
      ++cases;
      if (direct != recursive) count_ok = false;
    }
  res.checks.push_back(exact_line("fiber path count recursion", count_ok, cases));
  // unique factorization through the section
  SemidirectPresentation sd = semidirect(*inst.g);
  bool fact_ok = true;
  for (int a = 0; a < inst.g->size(); ++a) {
    ElementId h = sd.isotropy_part(a);
    if (inst.g->source(h) != inst.g->range(h) ||
        inst.g->compose(h, sd.sigma(inst.g->range(a), inst.g->source(a))) != a)
      fact_ok = false;
  }
  res.checks.push_back(exact_line("semidirect factorization g = h sigma", fact_ok,
                                  inst.g->size()));
  return res;
}

SuiteResult suite_cocycle(const Instance& inst, std::mt19937_64& rng) {
  SuiteResult res;
  res.name = "cocycle";
  const Groupoid& g = *inst.g;

  CocycleVerdict v = check_cocycle3(*inst.cocycle);
  res.checks.push_back(exact_line("3-cocycle identity (input)", v.pass, v.tuples_checked,
                                  v.pass ? "" : "violation at 4-tuple"));

  Cochain b2 = random_cochain(g, 2, rng);
  Cochain db2 = coboundary(b2);
  CocycleVerdict v2 = check_cocycle3(db2);
  res.checks.push_back(exact_line("coboundary of random 2-cochain is a cocycle", v2.pass,
                                  v2.tuples_checked));

  Cochain b1 = random_cochain(g, 1, rng);
  Cochain ddb = coboundary(coboundary(b1));
  res.checks.push_back(exact_line("d(d(b)) trivial", ddb.entry_count() == 0, g.size()));

  // single-entry mutation by angle 1/3 must be caught
  {
    Cochain mutated = db2;
    bool have_tuple = false;
    for (const auto& t : composable_tuples(g, 3)) {
      if (g.is_unit(t[0]) || g.is_unit(t[1]) || g.is_unit(t[2])) continue;
      std::span<const ElementId> sp(t.data(), t.size());
      mutated.set(sp, mutated.at(sp) * Phase::of(1, 3));
      have_tuple = true;
      break;
    }
    bool caught = have_tuple && !check_cocycle3(mutated).pass;
    res.checks.push_back(exact_line("single-entry mutation caught", caught, 1));
  }

  if (!inst.hom_labels.empty()) {
    auto zk = CayleyGroup::cyclic(inst.hom_order);
    Cochain infl = inflate(cyclic_cocycle3(zk, 1), g, inst.hom_labels);
    CocycleVerdict vi = check_cocycle3(infl);
    res.checks.push_back(exact_line("inflated generator cocycle passes", vi.pass,
                                    vi.tuples_checked));
    Cochain mixed = multiply(infl, coboundary(random_cochain(g, 2, rng)));
    res.checks.push_back(exact_line("inflation * coboundary passes",
                                    check_cocycle3(mixed).pass, 1));
  }

  // zeta/eta normalization: unit relation arrow gives the trivial phase
  {
    bool ok = true;
    long cases = 0;
    for (ElementId x : g.units())
      for (ElementId a : g.isotropy(x))
        for (ElementId b : g.isotropy(x)) {
          ++cases;
          if (!zeta(*inst.cocycle, x, a, b).is_one()) ok = false;
          if (!eta(*inst.cocycle, x, x, a).is_one()) ok = false;
        }
    res.checks.push_back(exact_line("zeta/eta trivial on unit relation arrows", ok, cases));
  }

  // on transitive principal groupoids, every cocycle bounds
  if (g.transitive() && [&] {
        for (ElementId x : g.units())
          if (g.isotropy(x).size() != 1) return false;
        return true;
      }()) {
    Cochain c = coboundary(random_cochain(g, 2, rng));
    Cochain witness = trivialize_principal(c);
    res.checks.push_back(
        exact_line("principal transitive: cocycle bounds", coboundary(witness) == c, 1));
  }
  return res;
}

SuiteResult suite_walk(const Instance& inst, int depth, std::mt19937_64& rng,
                       const std::string& csv_path) {
  SuiteResult res;
  res.name = "walk";
  const Groupoid& g = *inst.g;
  const int trials = 150;

  bool l1_contract = true, l1_equal = true, markov_mult = true, dual_ok = true, assoc = true,
       unit_conv = true;
  for (int t = 0; t < trials; ++t) {
    MeasureFamily<Rat> mu = random_rational_measure(g, rng);
    MeasureFamily<Rat> nu = random_rational_measure(g, rng);
    ElementId x = random_unit(g, rng);
    FiberFunction<Rat> fpos = random_rational_function(g, x, rng, true);
    FiberFunction<Rat> fsgn = random_rational_function(g, x, rng, false);
    FiberFunction<Rat> theta = random_rational_function(g, x, rng, false);

    if (l1_norm(convolve(g, fsgn, mu)) > l1_norm(fsgn)) l1_contract = false;
    if (l1_norm(convolve(g, fpos, mu)) != l1_norm(fpos)) l1_equal = false;

    // P_mu P_nu = P_{mu*nu} entrywise
    const auto& fiber = g.range_fiber(x);
    const size_t m = fiber.size();
    auto pm = markov_matrix(mu, x);
    auto pn = markov_matrix(nu, x);
    auto pmn = markov_matrix(convolve_families(mu, nu), x);
    for (size_t i = 0; i < m && markov_mult; ++i)
      for (size_t j = 0; j < m; ++j) {
        Rat acc(0);
        for (size_t k = 0; k < m; ++k) acc += pm[i * m + k] * pn[k * m + j];
        if (acc != pmn[i * m + j]) {
          markov_mult = false;
          break;
        }
      }

    // <theta P, f> = <theta * mu, f> for all f: compare vectors theta P and theta*mu
    {
      FiberFunction<Rat> tp;
      tp.x = x;
      tp.v.assign(m, Rat(0));
      for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) tp.v[j] += theta.v[i] * pm[i * m + j];
      FiberFunction<Rat> tc = convolve(g, theta, mu);
      for (size_t i = 0; i < m; ++i)
        if (tp.v[i] != tc.v[i]) dual_ok = false;
    }

    if (t < 20) {  // associativity is heavier; a smaller sample suffices
      MeasureFamily<Rat> a = convolve_families(convolve_families(mu, nu), nu);
      MeasureFamily<Rat> b = convolve_families(mu, convolve_families(nu, nu));
      for (int e = 0; e < g.size(); ++e)
        if (a.at(e) != b.at(e)) assoc = false;
    }

    // f = indicator of the unit x: f*mu = mu^x
    {
      FiberFunction<Rat> ind;
      ind.x = x;
      ind.v.assign(m, Rat(0));
      for (size_t i = 0; i < m; ++i)
        if (fiber[i] == x) ind.v[i] = Rat(1);
      FiberFunction<Rat> conv = convolve(g, ind, mu);
      FiberFunction<Rat> mf = mu.fiber(x);
      for (size_t i = 0; i < m; ++i)
        if (conv.v[i] != mf.v[i]) unit_conv = false;
    }
  }
  res.checks.push_back(exact_line("||f*mu||_1 <= ||f||_1", l1_contract, trials));
  res.checks.push_back(exact_line("||f*mu||_1 = ||f||_1 for f >= 0", l1_equal, trials));
  res.checks.push_back(exact_line("P_mu P_nu = P_{mu*nu}", markov_mult, trials));
  res.checks.push_back(exact_line("theta P_mu = theta * mu", dual_ok, trials));
  res.checks.push_back(exact_line("convolution associativity", assoc, 20));
  res.checks.push_back(exact_line("delta_x * mu = mu^x", unit_conv, trials));

  // Reiter profile and fixed space on the instance measure (double route)
  MeasureFamily<double> mud = to_double(*inst.measure);
  std::vector<std::pair<ElementId, std::vector<double>>> profiles;
  double final_entry = 0;
  for (ElementId a = 0; a < g.size(); ++a) {
    auto prof = reiter_profile(mud, a, depth);
    final_entry = std::max(final_entry, prof.back());
    profiles.push_back({a, std::move(prof)});
  }
  if (!csv_path.empty()) io::write_reiter_csv(csv_path, profiles);
  bool applicable = g.transitive() && inst.measure->full_support();
  if (applicable) {
    res.checks.push_back(
        residual_line("reiter profile -> 0 (depth " + std::to_string(depth) + ")", final_entry,
                      1e-6, g.size()));
    double worst_resid = 0;
    bool trivial = true;
    for (ElementId x : g.units()) {
      auto fs = harmonic_fixed_space(markov_matrix_dense(mud, x), 1e-8);
      worst_resid = std::max(worst_resid, fs.residual);
      if (!(fs.dimension == 1 && fs.trivial)) trivial = false;
    }
    CheckLine l = residual_line("harmonic fixed space = constants", worst_resid, 1e-8,
                                (long)g.units().size());
    l.pass = l.pass && trivial;
    res.checks.push_back(l);
  }
  return res;
}

SuiteResult suite_model(const Instance& inst, int level, double tol, std::mt19937_64& rng) {
  SuiteResult res;
  res.name = "model";
  const Groupoid& g = *inst.g;
  if (!inst.measure->full_support()) {
    res.error = "model suite needs a full-support measure";
    return res;
  }
  // refuse oversized path bases
  long worst_dim = 0;
  for (ElementId x : g.units())
    for (ElementId y : g.units()) {
      TupleConstraints tc;
      tc.range_unit = x;
      tc.source_unit = y;
      worst_dim = std::max(worst_dim, (long)composable_tuples(g, level + 1, tc).size());
    }
  if (worst_dim > 4096) {
    res.error = "path basis dimension " + std::to_string(worst_dim) + " exceeds cap 4096";
    return res;
  }

  model::Context ctx(g, *inst.cocycle);
  MeasureFamily<double> mud = to_double(*inst.measure);
  SemidirectPresentation sect = semidirect(g);

  for (const auto& c : model::check_intertwiner_families(ctx, level))
    res.checks.push_back(from_check(c, tol));
  res.checks.push_back(from_check(model::check_composition_of_u(ctx, level), tol));
  res.checks.push_back(from_check(model::check_u_versus_intertwiner(ctx, level), tol));
  res.checks.push_back(from_check(model::check_w_tower(ctx, level), tol));
  res.checks.push_back(from_check(model::check_equivariance(ctx, level, rng), tol));
  res.checks.push_back(from_check(model::check_composition_law(ctx, level, rng), tol));
  res.checks.push_back(from_check(model::check_pentagon(ctx, level), tol));

  auto st = model::check_state_expectation(ctx, level, mud, sect, rng);
  res.checks.push_back(from_check(st.state_normalized, 1e-12));
  res.checks.push_back(from_check(st.trace_rho, 1e-12));
  res.checks.push_back(from_check(st.bimodule, tol));
  res.checks.push_back(from_check(st.tower_state, tol));
  res.checks.push_back(from_check(st.expectation_alpha, tol));

  model::CheckResult center{"E_n on the center = P_mu"};
  for (ElementId x : g.units()) {
    auto c = model::check_center_markov(ctx, level, x, mud, rng);
    center.fold(c.max_residual, c.worst);
  }
  res.checks.push_back(from_check(center, tol));

  auto dg = model::check_density_dg(ctx, level, mud, sect, rng);
  res.checks.push_back(from_check(dg.transport, tol));
  res.checks.push_back(from_check(dg.phi_compatible, tol));

  auto ze = model::check_zeta_eta(ctx, level, sect);
  res.checks.push_back(from_check(ze.zeta_identity, tol));
  res.checks.push_back(from_check(ze.eta_identity, tol));
  res.checks.push_back(residual_line("zeta/eta scalar cross-check", ze.scalar_cross_check,
                                     1e-12, ze.zeta_identity.cases + ze.eta_identity.cases));
  return res;
}

namespace {

bool chi_equal(const CoefficientBundle& b, const CharCocycle& x, const CharCocycle& y) {
  const Groupoid& g = *b.g;
  for (int a = 0; a < g.size(); ++a)
    for (ElementId nn : x.n.fiber(g.range(a)))
      if (x.lam_at(b, nn, a) != y.lam_at(b, nn, a)) return false;
  for (ElementId u : g.units())
    for (ElementId m : x.n.fiber(u))
      for (ElementId nn : x.n.fiber(u))
        if (x.mu_at(b, m, nn) != y.mu_at(b, m, nn)) return false;
  for (ElementId u : g.units())
    for (ElementId nn : x.n.fiber(u))
      for (int t = x.t_min; t <= x.t_max; ++t)
        if (x.d_at(b, nn, t) != y.d_at(b, nn, t)) return false;
  return true;
}

}  // namespace

SuiteResult suite_invariants(std::mt19937_64& rng) {
  SuiteResult res;
  res.name = "invariants";

  // the (Z/4, Z/2) scalar instance
  auto z4 = CayleyGroup::cyclic(4);
  Groupoid g = make_group_bundle(1, z4);
  CoefficientBundle bundle = CoefficientBundle::scalar(g);
  NormalSubgroupoid n;
  n.g = &g;
  n.member.assign(g.size(), 0);
  n.member[0] = n.member[2] = 1;
  Cochain c_trivial(g, 3);

  auto lam_mu_solutions = search_scalar_solutions(bundle, n, c_trivial, 4, false);
  res.checks.push_back(exact_line("brute force (Z/4,Z/2) lambda/mu solutions = 8",
                                  lam_mu_solutions.size() == 8,
                                  (long)lam_mu_solutions.size()));
  auto full_solutions = search_scalar_solutions(bundle, n, c_trivial, 4, true);
  res.checks.push_back(exact_line("brute force (Z/4,Z/2) full (lambda,mu,d) solutions = 16",
                                  full_solutions.size() == 16, (long)full_solutions.size()));
  bool all_cc = true;
  for (const auto& chi : full_solutions)
    if (!check_CC(bundle, chi, c_trivial).all_pass()) all_cc = false;
  res.checks.push_back(
      exact_line("(CC1)-(CC7) exact on the solution set", all_cc, (long)full_solutions.size()));

  // coboundary perturbation: closure on the solution set, and twist/untwist
  std::uniform_int_distribution<int> quarter(0, 3);
  bool closure = true, invol = true;
  for (const auto& chi : full_solutions) {
    std::map<ElementId, BundleUnitary> z, zinv;
    BundleUnitary zval = {Phase::of(quarter(rng), 4)};
    z[2] = zval;
    zinv[2] = bu_conj(zval);
    CharCocycle tw = coboundary_perturb(bundle, chi, z);
    if (!check_CC(bundle, tw, c_trivial).all_pass()) closure = false;
    bool found = false;
    for (const auto& other : full_solutions)
      if (chi_equal(bundle, tw, other)) found = true;
    if (!found) closure = false;
    if (!chi_equal(bundle, coboundary_perturb(bundle, tw, zinv), chi)) invol = false;
  }
  res.checks.push_back(exact_line("coboundary_perturb preserves the solution set", closure,
                                  (long)full_solutions.size()));
  res.checks.push_back(exact_line("twist then untwist is the identity", invol,
                                  (long)full_solutions.size()));

  // mutation: with N = G = Z/4 a single mu entry breaks (CC3)
  {
    NormalSubgroupoid nfull;
    nfull.g = &g;
    nfull.member.assign(g.size(), 1);
    CharCocycle chi = CharCocycle::trivial(nfull);
    bool before = check_CC(bundle, chi, c_trivial).all_pass();
    chi.mu[{1, 1}] = {Phase::of(1, 3)};
    CCReport after = check_CC(bundle, chi, c_trivial);
    bool broke = !after.at(3).pass || !after.at(5).pass;
    res.checks.push_back(exact_line("mu mutation breaks (CC3) or (CC5)", before && broke, 1));
  }

  // a nontrivial coefficient bundle: Z/2 with a 4-point fiber and shift
  {
    auto z2 = CayleyGroup::cyclic(2);
    Groupoid g2 = make_group_bundle(1, z2);
    CoefficientBundle b2;
    b2.g = &g2;
    b2.fiber_size.assign(g2.size(), 4);
    b2.theta.assign(g2.size(), {1, 2, 3, 0});
    b2.beta.assign(g2.size(), {0, 1, 2, 3});
    b2.validate();
    NormalSubgroupoid n2;
    n2.g = &g2;
    n2.member.assign(g2.size(), 1);
    Cochain c2(g2, 3);
    CharCocycle chi;
    chi.n = n2;
    chi.mu[{1, 1}] = BundleUnitary(4, Phase::of(1, 4));
    std::map<ElementId, BundleUnitary> dgen;
    dgen[1] = {Phase::one(), Phase::of(1, 2), Phase::one(), Phase::of(1, 2)};
    chi.generate_d(b2, dgen);
    CCReport rep = check_CC(b2, chi, c2);
    res.checks.push_back(exact_line("nontrivial 4-point bundle example passes (CC1)-(CC7)",
                                    rep.all_pass(), 1));
    // corrupt one tabulated d entry: (CC7) must fail
    chi.d[{1, 2}] = bu_scale(chi.d[{1, 2}], Phase::of(1, 3));
    res.checks.push_back(exact_line("corrupted d entry breaks (CC7)",
                                    !check_CC(b2, chi, c2).at(7).pass, 1));
  }
  return res;
}

SuiteResult suite_appendix(std::mt19937_64& rng) {
  SuiteResult res;
  res.name = "appendix";
  (void)rng;

  auto z4 = CayleyGroup::cyclic(4);
  Groupoid g = make_group_bundle(1, z4);
  CoefficientBundle bundle = CoefficientBundle::scalar(g);
  NormalSubgroupoid n;
  n.g = &g;
  n.member.assign(g.size(), 0);
  n.member[0] = n.member[2] = 1;
  QuotientPresentation qp = make_quotient(g, n);
  res.checks.push_back(exact_line("quotient presentation valid (section, n(p,q) law)", true,
                                  (long)qp.q.order));

  Cochain c_trivial(g, 3);
  // c inflated from Q = Z/2 through pi
  Cochain c_inflated(g, 3);
  {
    auto z2 = CayleyGroup::cyclic(2);
    GroupCochain3 gen = cyclic_cocycle3(z2, 1);
    std::vector<int> pi_labels(g.size());
    for (int a = 0; a < g.size(); ++a) pi_labels[a] = qp.pi[a];
    c_inflated = inflate(gen, g, pi_labels);
  }

  for (const Cochain* c : {&c_trivial, &c_inflated}) {
    bool is_trivial = (c == &c_trivial);
    std::string tag = is_trivial ? "trivial c" : "inflated c";
    auto sols = search_scalar_solutions(bundle, n, *c, 4, true);
    res.checks.push_back(exact_line("solutions exist for " + tag, !sols.empty(),
                                    (long)sols.size()));
    bool a3 = true, a4 = true, desc = true, coc = true, d1d2 = true;
    for (const auto& chi : sols) {
      AppendixReport rep = check_appendix(bundle, chi, *c, qp);
      desc &= rep.descent_ok;
      a3 &= rep.a3_identity;
      a4 &= rep.a4_reconstruction && rep.reconstruction_cocycle;
      coc &= rep.d1_is_cocycle;
      d1d2 &= check_d1d2_cocycle(bundle, chi, *c, qp, 1);
    }
    res.checks.push_back(exact_line("c * conj(da) descends to Q (" + tag + ")", desc,
                                    (long)sols.size()));
    res.checks.push_back(exact_line("A.3: d1 = c(s,s,s) delta[lambda,mu] (" + tag + ")", a3,
                                    (long)sols.size()));
    res.checks.push_back(exact_line("d1 is a 3-cocycle on Q (" + tag + ")", coc,
                                    (long)sols.size()));
    res.checks.push_back(exact_line("A.4: c = da * pi*(d1) (" + tag + ")", a4,
                                    (long)sols.size()));
    res.checks.push_back(exact_line("d1 d2 is a 3-cocycle on Q x Z (" + tag + ")", d1d2,
                                    (long)sols.size()));
  }

  // nontrivial n(p,q) with trivial lambda/mu gives delta = 1
  {
    CharCocycle chi = CharCocycle::trivial(n);
    GroupCochain3 delta = hjr_delta(bundle, chi, qp);
    bool trivial = std::all_of(delta.v.begin(), delta.v.end(),
                               [](const Phase& p) { return p.is_one(); });
    bool n_nontrivial = false;
    for (int p = 0; p < qp.q.order; ++p)
      for (int q2 = 0; q2 < qp.q.order; ++q2)
        if (!g.is_unit(qp.n_of(p, q2))) n_nontrivial = true;
    res.checks.push_back(exact_line("delta = 1 for trivial lambda/mu despite n(p,q) != e",
                                    trivial && n_nontrivial, (long)delta.v.size()));
  }

  // N trivial: Q = G, delta = 1, d1 = c(s,s,s), a = 1
  {
    NormalSubgroupoid ntriv;
    ntriv.g = &g;
    ntriv.member.assign(g.size(), 0);
    ntriv.member[0] = 1;
    QuotientPresentation qt = make_quotient(g, ntriv);
    CharCocycle chi = CharCocycle::trivial(ntriv);
    Cochain c = c_inflated;
    GroupCochain3 delta = hjr_delta(bundle, chi, qt);
    bool delta_trivial = std::all_of(delta.v.begin(), delta.v.end(),
                                     [](const Phase& p) { return p.is_one(); });
    Cochain a = lemma_a4_cochain(bundle, chi, qt);
    AppendixReport rep = check_appendix(bundle, chi, c, qt);
    res.checks.push_back(exact_line("N trivial: delta = 1, a = 1, d1 = c o section",
                                    delta_trivial && a.entry_count() == 0 && rep.all(), 1));
  }
  return res;
}

Report run(const RunConfig& cfg) {
  Report rep;
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::string> names = cfg.suite_names;
  if (names.empty() ||
      std::find(names.begin(), names.end(), "all") != names.end())
    names = {"axioms", "cocycle", "walk", "model", "invariants", "appendix"};

  bool needs_instance = false;
  for (const auto& s : names)
    if (s == "axioms" || s == "cocycle" || s == "walk" || s == "model") needs_instance = true;

  std::optional<Instance> inst;
  if (needs_instance) inst = make_instance(cfg);

  for (const std::string& s : names) {
    if (s == "axioms")
      rep.suites.push_back(suite_axioms(*inst));
    else if (s == "cocycle")
      rep.suites.push_back(suite_cocycle(*inst, rng));
    else if (s == "walk")
      rep.suites.push_back(suite_walk(*inst, cfg.depth, rng, cfg.csv));
    else if (s == "model")
      rep.suites.push_back(suite_model(*inst, cfg.level, cfg.tol, rng));
    else if (s == "invariants")
      rep.suites.push_back(suite_invariants(rng));
    else if (s == "appendix")
      rep.suites.push_back(suite_appendix(rng));
    else
      throw std::invalid_argument("unknown suite '" + s + "'");
  }
  return rep;
}

io::json report_to_json(const Report& rep, const RunConfig& cfg) {
  io::json j;
  j["report_version"] = 1;
  io::json jc;
  jc["input"] = cfg.input;
  jc["generate"] = cfg.generate;
  jc["level"] = cfg.level;
  jc["tol"] = cfg.tol;
  jc["depth"] = cfg.depth;
  jc["seed"] = cfg.seed;
  j["config"] = jc;
  io::json suites = io::json::array();
  for (const auto& s : rep.suites) {
    io::json js;
    js["name"] = s.name;
    js["pass"] = s.pass();
    if (!s.error.empty()) js["error"] = s.error;
    io::json checks = io::json::array();
    for (const auto& c : s.checks) {
      io::json jl;
      jl["name"] = c.name;
      jl["pass"] = c.pass;
      jl["exact"] = c.exact;
      if (!c.exact) {
        jl["max_residual"] = c.residual;
        jl["tolerance"] = c.tolerance;
      }
      jl["cases"] = c.cases;
      if (!c.worst.empty()) jl["worst"] = c.worst;
      checks.push_back(jl);
    }
    js["checks"] = checks;
    suites.push_back(js);
  }
  j["suites"] = suites;
  j["pass"] = rep.pass();
  return j;
}

}  // namespace gpd::suites
