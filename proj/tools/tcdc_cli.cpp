// Command-line front end: configure a job, simulate the shuffle on the
// chosen topology, and print / write the load report.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tcdc/experiment.hpp"

namespace {

long long parse_count(const std::string& text, const char* what) {
  if (text == "auto") return tcdc::kAuto;
  try {
    size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used == text.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(std::string(what) + " must be a positive integer or 'auto'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded-shuffle simulator: measures per-link load on a star or "
               "fat-tree network and certifies it against the optimum"};

  tcdc::ExperimentConfig cfg;
  std::string files = "auto", funcs = "auto", topo = "star";
  cfg.r_list.clear();

  app.add_option("--servers", cfg.K, "Number of servers K")->capture_default_str();
  app.add_option("--computation-load", cfg.r_list,
                 "Computation load r (repeat for a sweep)")
      ->expected(-1);
  app.add_option("--reducers-per-function", cfg.s, "Servers reducing each function")
      ->capture_default_str();
  app.add_option("--files", files, "Input files N, or 'auto' for binom(K,r)")
      ->capture_default_str();
  app.add_option("--functions", funcs, "Output functions Q, or 'auto' for binom(K,s)")
      ->capture_default_str();
  app.add_option("--iv-bits", cfg.T, "Bits per intermediate value T")->capture_default_str();
  app.add_option("--topology", topo, "star | fat-tree")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for the synthetic map outputs")
      ->capture_default_str();
  app.add_flag("--theory-only", cfg.theory_only,
               "Skip the simulation; emit the optimal-load curve only");
  app.add_option("--dump-topology", cfg.dump_topology_path, "Write the topology as JSON");
  app.add_option("--ledger", cfg.ledger_path, "Write the per-link ledger as CSV");
  app.add_option("--out", cfg.out_path, "Write the run report");
  app.add_option("--format", cfg.format, "Report format: csv | json")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.N = parse_count(files, "--files");
    cfg.Q = parse_count(funcs, "--functions");
    if (topo == "star")
      cfg.topology = tcdc::ExperimentConfig::Topo::Star;
    else if (topo == "fat-tree")
      cfg.topology = tcdc::ExperimentConfig::Topo::FatTree;
    else
      throw tcdc::RangeError("--topology must be star or fat-tree");
    if (cfg.r_list.empty()) cfg.r_list = {2};
    if (cfg.s > 1 && !cfg.theory_only)
      throw tcdc::UnsupportedCascade(
          "simulation covers s = 1; use --theory-only for the s > 1 bounds");

    tcdc::Report rep = tcdc::run_sweep(cfg);
    tcdc::emit(rep, cfg);
    tcdc::render_console(rep, std::cout);
    return rep.all_pass ? 0 : 1;
  } catch (const tcdc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
