#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpd/char_cocycle.hpp"
#include "gpd/cochain.hpp"
#include "gpd/groupoid.hpp"
#include "gpd/io.hpp"
#include "gpd/measure.hpp"

namespace gpd::suites {

struct CheckLine {
  std::string name;
  bool exact = false;  // exact rational identity vs double residual
  double residual = 0;
  double tolerance = 0;  // 0 for exact checks
  bool pass = false;
  long cases = 0;
  std::string worst;
};

struct SuiteResult {
  std::string name;
  std::string error;  // set when the suite refused to run
  std::vector<CheckLine> checks;
  bool pass() const;
};

struct Report {
  std::vector<SuiteResult> suites;
  bool pass() const;
};

struct RunConfig {
  std::string input;              // groupoid JSON path
  std::string cochain_input;      // optional cochain JSON
  std::string measure_input;      // optional measure JSON
  std::string char_input;         // optional characteristic cocycle JSON
  std::string generate;           // pair:3 | cyclic:4 | bundle:2,3 | translation:4 | swap2 | z2xpair:2
  std::vector<std::string> suite_names;
  int level = 2;
  double tol = 1e-9;
  int depth = 12;
  std::uint64_t seed = 1;
  std::string out;  // report JSON path
  std::string csv;  // reiter CSV path
};

// A work item: groupoid with the cocycle/measure the suites act on.
struct Instance {
  std::string name;
  std::shared_ptr<const Groupoid> g;
  std::shared_ptr<const Cochain> cocycle;            // never null (trivial default)
  std::shared_ptr<const MeasureFamily<Rat>> measure;  // never null (uniform default)
  std::vector<int> hom_labels;  // arrow -> Z/hom_order, empty when unavailable
  int hom_order = 0;
};

Instance make_instance(const RunConfig& cfg);
Instance generate_instance(const std::string& kind_spec);

// Bundled corpus for `emit` and the acceptance gate. Perturbed measures are
// full-support with enough spectral gap for depth-12 profiles.
struct BundledExample {
  std::string name;
  std::shared_ptr<const Groupoid> g;
  std::shared_ptr<const MeasureFamily<Rat>> uniform;
  std::shared_ptr<const MeasureFamily<Rat>> perturbed;
  std::shared_ptr<const Cochain> trivial_c;
  std::shared_ptr<const Cochain> inflated_c;  // may be null
  std::vector<int> hom_labels;
  int hom_order = 0;
  bool model_scale = false;  // eligible for the level <= 3 matrix suites
};
const std::vector<BundledExample>& bundled_examples();

// write groupoid + cocycle + measure JSON files for every bundled example
std::vector<std::string> emit_examples(const std::string& dir);

SuiteResult suite_axioms(const Instance& inst);
SuiteResult suite_cocycle(const Instance& inst, std::mt19937_64& rng);
SuiteResult suite_walk(const Instance& inst, int depth, std::mt19937_64& rng,
                       const std::string& csv_path = "");
SuiteResult suite_model(const Instance& inst, int level, double tol, std::mt19937_64& rng);
SuiteResult suite_invariants(std::mt19937_64& rng);
SuiteResult suite_appendix(std::mt19937_64& rng);

Report run(const RunConfig& cfg);
io::json report_to_json(const Report& rep, const RunConfig& cfg);

}  // namespace gpd::suites
