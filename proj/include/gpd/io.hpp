#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gpd/char_cocycle.hpp"
#include "gpd/cochain.hpp"
#include "gpd/groupoid.hpp"
#include "gpd/measure.hpp"

namespace gpd::io {

using json = nlohmann::ordered_json;

// {"units":[...], "source":[...], "range":[...], "compose":[[g,h,gh],...], "inverse":[...]}
json groupoid_to_json(const Groupoid& g);
Groupoid groupoid_from_json(const json& j);

// list of [t1,...,tn, numerator, denominator]; omitted tuples are trivial
json cochain_to_json(const Cochain& c);
Cochain cochain_from_json(const json& j, const Groupoid& g, int arity_if_empty = 3);

// list of [arrow, numerator, denominator]
json measure_to_json(const MeasureFamily<Rat>& mu);
MeasureFamily<Rat> measure_from_json(const json& j, const Groupoid& g);

// bundle + (N, lambda, mu, d) tables as rational angles per fiber point
json char_cocycle_to_json(const CoefficientBundle& b, const CharCocycle& chi);
std::pair<CoefficientBundle, CharCocycle> char_cocycle_from_json(const json& j,
                                                                 const Groupoid& g);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

// columns: g,n,l1_distance
void write_reiter_csv(const std::string& path,
                      const std::vector<std::pair<ElementId, std::vector<double>>>& profiles);

}  // namespace gpd::io
