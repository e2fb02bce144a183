#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>

#include "gpd/suites.hpp"

namespace {

int cmd_run(const gpd::suites::RunConfig& cfg) {
  gpd::suites::Report rep = gpd::suites::run(cfg);
  gpd::io::json j = gpd::suites::report_to_json(rep, cfg);
  if (!cfg.out.empty()) {
    gpd::io::save_json_file(cfg.out, j);
  } else {
    std::cout << j.dump(2) << "\n";
  }
  for (const auto& s : rep.suites) {
    std::fprintf(stderr, "[%s] %s\n", s.pass() ? "PASS" : "FAIL", s.name.c_str());
    if (!s.error.empty()) std::fprintf(stderr, "       refused: %s\n", s.error.c_str());
    for (const auto& c : s.checks) {
      if (c.exact)
        std::fprintf(stderr, "  %s  %s (cases=%ld)\n", c.pass ? "ok  " : "FAIL",
                     c.name.c_str(), c.cases);
      else
        std::fprintf(stderr, "  %s  %s (residual=%.3g tol=%.3g cases=%ld)\n",
                     c.pass ? "ok  " : "FAIL", c.name.c_str(), c.residual, c.tolerance,
                     c.cases);
    }
  }
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite groupoid cocycles, random walks and matrix model actions"};
  app.require_subcommand(1);

  gpd::suites::RunConfig cfg;
  std::vector<std::string> suites;

  CLI::App* run = app.add_subcommand("run", "run verification suites and write a report");
  run->add_option("--input", cfg.input, "groupoid JSON file");
  run->add_option("--generate", cfg.generate,
                  "generate an instance (pair:3, cyclic:4, bundle:2,3, translation:4, swap2, "
                  "z2xpair:2)");
  run->add_option("--cocycle", cfg.cochain_input, "3-cocycle JSON file");
  run->add_option("--measure", cfg.measure_input, "measure family JSON file");
  run->add_option("--charcocycle", cfg.char_input, "characteristic cocycle JSON file");
  run->add_option("--suite", suites,
                  "suites to run: axioms|cocycle|walk|model|invariants|appendix|all")
      ->delimiter(',');
  run->add_option("--level", cfg.level, "model tower level n")->check(CLI::Range(1, 6));
  run->add_option("--tol", cfg.tol, "residual tolerance for the matrix suites")
      ->check(CLI::PositiveNumber);
  run->add_option("--depth", cfg.depth, "reiter profile depth")->check(CLI::Range(1, 64));
  run->add_option("--seed", cfg.seed, "seed for randomized instances");
  run->add_option("--out", cfg.out, "report JSON output path (default: stdout)");
  run->add_option("--csv", cfg.csv, "reiter profile CSV output path");

  std::string emit_dir = "examples_out";
  CLI::App* emit = app.add_subcommand("emit", "write the bundled example corpus as JSON files");
  emit->add_option("--dir", emit_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      cfg.suite_names = suites;
      return cmd_run(cfg);
    }
    if (emit->parsed()) {
      for (const auto& f : gpd::suites::emit_examples(emit_dir)) std::cout << f << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
