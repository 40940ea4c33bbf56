#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tcdc/bounds.hpp"
#include "tcdc/job.hpp"
#include "tcdc/routing.hpp"

namespace tcdc {

constexpr long long kAuto = -1;  // N or Q: smallest admissible value

struct ExperimentConfig {
  int K = 16;
  std::vector<int> r_list = {2};
  int s = 1;
  long long N = kAuto;
  long long Q = kAuto;
  int T = 64;
  enum class Topo { Star, FatTree };
  Topo topology = Topo::Star;
  uint64_t seed = 1;
  bool theory_only = false;

  std::string out_path;            // report destination ("" = console only)
  std::string format = "csv";      // csv | json
  std::string ledger_path;         // per-link ledger ("" = skip)
  std::string dump_topology_path;  // topology json ("" = skip)
};

struct RunRow {
  int run_id = 0;
  JobSpec job;
  std::string topology;
  int arity = 0;  // 0 for the star
  LedgerSummary summary;
  int decode_servers = 0;
  long long decode_values = 0;
  long long flow_comparisons = 0;
  bool pass = false;
  double wall_ms = 0;  // console only; never written to files
  std::string ledger_csv_text;      // rendered per-link ledger
  std::string ledger_summary_text;  // rendered summary json
};

struct TheoryRow {
  int r = 0;
  Rational l;
  Rational d;
};

struct EnvelopeSample {
  Rational r;  // tenths between 1 and K
  Rational value;
};

struct Report {
  ExperimentConfig config;
  std::vector<RunRow> rows;
  std::vector<TheoryRow> theory;      // integer r = 1..K
  std::vector<EnvelopeSample> envelope;  // 0.1-granularity samples
  std::string topology_json_text;
  bool all_pass = true;
};

// One simulated shuffle for a single r: map, code, route, account, decode.
Report run_experiment(const ExperimentConfig& config);

// All r values (ascending, deduplicated) plus the theory curve.
Report run_sweep(const ExperimentConfig& config);

// Report CSV rows; header is fixed.
std::string report_csv(const Report& report);
// Envelope samples ("r,envelope,d_star"; d_star only at integer r).
std::string theory_csv(const Report& report);
// Full detail, exact rationals as "num/den" strings.
std::string report_json(const Report& report);

// Write the configured outputs (report, theory, ledger, topology).
void emit(const Report& report, const ExperimentConfig& config);

void render_console(const Report& report, std::ostream& os);

}  // namespace tcdc
