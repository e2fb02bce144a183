#include "gpd/io.hpp"

#include <fstream>
#include <stdexcept>

namespace gpd::io {

json groupoid_to_json(const Groupoid& g) {
  json j;
  j["units"] = g.units();
  json src = json::array(), rng = json::array(), inv = json::array();
  for (int a = 0; a < g.size(); ++a) {
    src.push_back(g.source(a));
    rng.push_back(g.range(a));
    inv.push_back(g.inverse(a));
  }
  j["source"] = src;
  j["range"] = rng;
  j["inverse"] = inv;
  json comp = json::array();
  for (int a = 0; a < g.size(); ++a)
    for (int b = 0; b < g.size(); ++b)
      if (g.composable(a, b)) comp.push_back({a, b, g.compose(a, b)});
  j["compose"] = comp;
  return j;
}

Groupoid groupoid_from_json(const json& j) {
  for (const char* key : {"units", "source", "range", "compose", "inverse"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("groupoid json: missing key '") + key + "'");
  std::vector<ElementId> src = j["source"].get<std::vector<ElementId>>();
  std::vector<ElementId> rng = j["range"].get<std::vector<ElementId>>();
  std::vector<ElementId> inv = j["inverse"].get<std::vector<ElementId>>();
  std::vector<std::array<ElementId, 3>> comp;
  for (const auto& e : j["compose"]) {
    if (!e.is_array() || e.size() != 3)
      throw std::invalid_argument("groupoid json: compose entries must be [g,h,gh]");
    comp.push_back({e[0].get<ElementId>(), e[1].get<ElementId>(), e[2].get<ElementId>()});
  }
  Groupoid g(src, rng, inv, comp);
  std::vector<ElementId> claimed = j["units"].get<std::vector<ElementId>>();
  if (claimed != g.units())
    throw std::invalid_argument("groupoid json: declared units do not match source/range data");
  return g;
}

json cochain_to_json(const Cochain& c) {
  json j = json::array();
  auto entries = c.entries();
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [t, p] : entries) {
    json row = json::array();
    for (ElementId e : t) row.push_back(e);
    row.push_back(p.angle().num());
    row.push_back(p.angle().den());
    j.push_back(row);
  }
  return j;
}

Cochain cochain_from_json(const json& j, const Groupoid& g, int arity_if_empty) {
  if (!j.is_array()) throw std::invalid_argument("cochain json: expected a list");
  if (j.empty()) return Cochain(g, arity_if_empty);
  int arity = (int)j[0].size() - 2;
  Cochain c(g, arity);
  for (const auto& row : j) {
    if ((int)row.size() != arity + 2)
      throw std::invalid_argument("cochain json: ragged entry");
    std::vector<ElementId> t(arity);
    for (int i = 0; i < arity; ++i) t[i] = row[i].get<ElementId>();
    Phase p = Phase::of(row[arity].get<std::int64_t>(), row[arity + 1].get<std::int64_t>());
    c.set(std::span<const ElementId>(t.data(), t.size()),
          c.at(std::span<const ElementId>(t.data(), t.size())) * p);
  }
  return c;
}

json measure_to_json(const MeasureFamily<Rat>& mu) {
  json j = json::array();
  for (int a = 0; a < mu.groupoid().size(); ++a) {
    const Rat& w = mu.at(a);
    if (!w.is_zero()) j.push_back({a, w.num(), w.den()});
  }
  return j;
}

MeasureFamily<Rat> measure_from_json(const json& j, const Groupoid& g) {
  if (!j.is_array()) throw std::invalid_argument("measure json: expected a list");
  std::vector<Rat> w(g.size(), Rat(0));
  for (const auto& row : j) {
    if (row.size() != 3) throw std::invalid_argument("measure json: entries must be [g,num,den]");
    int a = row[0].get<int>();
    if (a < 0 || a >= g.size()) throw std::invalid_argument("measure json: arrow out of range");
    w[a] = Rat(row[1].get<std::int64_t>(), row[2].get<std::int64_t>());
  }
  return MeasureFamily<Rat>(g, std::move(w));
}

static json unitary_to_json(const BundleUnitary& u) {
  json j = json::array();
  for (const Phase& p : u) j.push_back({p.angle().num(), p.angle().den()});
  return j;
}

static BundleUnitary unitary_from_json(const json& j) {
  BundleUnitary u;
  for (const auto& e : j) u.push_back(Phase::of(e[0].get<std::int64_t>(), e[1].get<std::int64_t>()));
  return u;
}

json char_cocycle_to_json(const CoefficientBundle& b, const CharCocycle& chi) {
  json j;
  json nmem = json::array();
  for (int a = 0; a < b.g->size(); ++a)
    if (chi.n.member[a]) nmem.push_back(a);
  j["N"] = nmem;
  j["fiber_size"] = b.fiber_size;
  j["theta"] = b.theta;
  j["beta"] = b.beta;
  j["t_window"] = {chi.t_min, chi.t_max};
  json lam = json::array();
  for (const auto& [key, u] : chi.lambda) lam.push_back({key.first, key.second, unitary_to_json(u)});
  j["lambda"] = lam;
  json mu = json::array();
  for (const auto& [key, u] : chi.mu) mu.push_back({key.first, key.second, unitary_to_json(u)});
  j["mu"] = mu;
  json d = json::array();
  for (const auto& [key, u] : chi.d) d.push_back({key.first, key.second, unitary_to_json(u)});
  j["d"] = d;
  return j;
}

std::pair<CoefficientBundle, CharCocycle> char_cocycle_from_json(const json& j,
                                                                 const Groupoid& g) {
  CoefficientBundle b;
  b.g = &g;
  b.fiber_size = j["fiber_size"].get<std::vector<int>>();
  b.theta = j["theta"].get<std::vector<std::vector<int>>>();
  b.beta = j["beta"].get<std::vector<std::vector<int>>>();
  b.validate();
  CharCocycle chi;
  chi.n.g = &g;
  chi.n.member.assign(g.size(), 0);
  for (const auto& e : j["N"]) chi.n.member[e.get<int>()] = 1;
  chi.n.validate();
  if (j.contains("t_window")) {
    chi.t_min = j["t_window"][0].get<int>();
    chi.t_max = j["t_window"][1].get<int>();
  }
  for (const auto& e : j["lambda"])
    chi.lambda[{e[0].get<int>(), e[1].get<int>()}] = unitary_from_json(e[2]);
  for (const auto& e : j["mu"])
    chi.mu[{e[0].get<int>(), e[1].get<int>()}] = unitary_from_json(e[2]);
  for (const auto& e : j["d"])
    chi.d[{e[0].get<int>(), e[1].get<int>()}] = unitary_from_json(e[2]);
  return {b, chi};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("parse error in " + path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_reiter_csv(const std::string& path,
                      const std::vector<std::pair<ElementId, std::vector<double>>>& profiles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "g,n,l1_distance\n";
  out.precision(17);
  for (const auto& [g, prof] : profiles)
    for (size_t n = 0; n < prof.size(); ++n)
      out << g << "," << (n + 1) << "," << prof[n] << "\n";
}

}  // namespace gpd::io
