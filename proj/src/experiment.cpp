#include "tcdc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "json.hpp"

#include "tcdc/combinatorics.hpp"

namespace tcdc {

namespace {

std::string decimal12(const Rational& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v.to_double());
  return buf;
}

long long resolve_files(const ExperimentConfig& cfg, int r) {
  return cfg.N == kAuto ? binomial(cfg.K, r) : cfg.N;
}

long long resolve_funcs(const ExperimentConfig& cfg) {
  return cfg.Q == kAuto ? binomial(cfg.K, cfg.s) : cfg.Q;
}

RunRow run_one(const ExperimentConfig& cfg, int r, int run_id) {
  auto t0 = std::chrono::steady_clock::now();
  RunRow row;
  row.run_id = run_id;
  row.job = make_job(cfg.K, r, cfg.s, resolve_files(cfg, r), resolve_funcs(cfg), cfg.T);

  Placement pl = place_files(row.job);
  ReduceAssignment ra = assign_reducers(row.job);
  IntermediateStore store = map_phase(row.job, pl, cfg.seed);

  bool star = cfg.topology == ExperimentConfig::Topo::Star;
  Topology topo = star ? build_star(cfg.K) : build_fat_tree(choose_arity(cfg.K));
  ServerMap smap = place_servers(topo, cfg.K);
  row.topology = star ? "star" : "fat-tree";
  row.arity = topo.arity;

  long long granularity = star ? 1 : static_cast<long long>(topo.half()) * topo.half();
  MessageSet msgs = build_messages(row.job, pl, ra, store, granularity);

  bool full = cfg.K == topo.slot_count();
  std::vector<std::vector<const SubMessage*>> received(cfg.K);
  StarResult star_res;
  FatTreeResult tree_res;
  if (star) {
    star_res = shuffle_star(msgs, topo);
    row.summary = ledger_summary(star_res.ledger, row.job, full);
    row.flow_comparisons = star_res.flow.comparisons;
    received = std::move(star_res.delivered);
    row.ledger_csv_text = ledger_csv(star_res.ledger);
  } else {
    tree_res = downlink_fat_tree(uplink_fat_tree(msgs, topo, smap), topo, smap, msgs);
    row.summary = ledger_summary(tree_res.ledger, row.job, full);
    row.flow_comparisons = tree_res.flow.comparisons;
    for (int k = 1; k <= cfg.K; ++k)
      for (const SubMessage& m : tree_res.delivered[k - 1]) received[k - 1].push_back(&m);
    row.ledger_csv_text = ledger_csv(tree_res.ledger);
  }

  bool decode_ok = true;
  std::string decode_detail;
  for (int k = 1; k <= cfg.K && decode_ok; ++k) {
    try {
      DecodeResult res = decode(row.job, pl, ra, store, k, received[k - 1]);
      row.decode_values += res.values_recovered;
      ++row.decode_servers;
    } catch (const DecodeFailure& e) {
      decode_ok = false;
      decode_detail = e.what();
    }
  }
  if (decode_ok)
    decode_detail = std::to_string(row.decode_servers) + " servers, " +
                    std::to_string(row.decode_values) + " values";
  row.summary.checks.push_back({"decode_all_servers", decode_ok, true, decode_detail});
  row.summary.checks.push_back(
      {"flow_conservation", true, true,
       std::to_string(row.flow_comparisons) + " emissions verified"});
  if (!decode_ok) row.summary.all_pass = false;
  row.pass = row.summary.all_pass;
  row.ledger_summary_text = ledger_summary_json(row.summary);

  auto t1 = std::chrono::steady_clock::now();
  row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return row;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

std::string with_r_suffix(const std::string& path, int r) {
  size_t dot = path.find_last_of('.');
  size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".r" + std::to_string(r);
  return path.substr(0, dot) + ".r" + std::to_string(r) + path.substr(dot);
}

}  // namespace

Report run_sweep(const ExperimentConfig& config) {
  if (config.r_list.empty()) throw RangeError("run_sweep: need at least one r");
  if (config.format != "csv" && config.format != "json")
    throw RangeError("run_sweep: format must be csv or json");

  Report rep;
  rep.config = config;

  std::set<int> rs(config.r_list.begin(), config.r_list.end());
  for (int r = 1; r <= config.K; ++r) {
    rep.theory.push_back({r, l_star(config.K, r, config.s), d_star(config.K, r, config.s)});
  }
  if (config.K >= 1) {
    ConvexEnvelope env = d_star_envelope(config.K, config.s);
    for (long long i = 10; i <= 10LL * config.K; ++i) {
      Rational r = Rational(i, 10);
      rep.envelope.push_back({r, env.eval(r)});
    }
  }

  bool star = config.topology == ExperimentConfig::Topo::Star;
  Topology topo = star ? build_star(config.K) : build_fat_tree(choose_arity(config.K));
  rep.topology_json_text = topology_json(topo);

  if (!config.theory_only) {
    int run_id = 1;
    for (int r : rs) {
      rep.rows.push_back(run_one(config, r, run_id++));
      if (!rep.rows.back().pass) rep.all_pass = false;
    }
  }
  return rep;
}

Report run_experiment(const ExperimentConfig& config) {
  if (config.r_list.size() != 1)
    throw RangeError("run_experiment: exactly one r; use run_sweep for several");
  return run_sweep(config);
}

std::string report_csv(const Report& report) {
  std::string out = "run_id,K,r,s,N,Q,T,topology,t,D_measured,D_star,pass\n";
  for (const RunRow& row : report.rows) {
    out += std::to_string(row.run_id) + "," + std::to_string(row.job.K) + "," +
           std::to_string(row.job.r) + "," + std::to_string(row.job.s) + "," +
           std::to_string(row.job.N) + "," + std::to_string(row.job.Q) + "," +
           std::to_string(row.job.T) + "," + row.topology + "," + std::to_string(row.arity) +
           "," + row.summary.D.str() + "," + row.summary.d_star_val.str() + "," +
           (row.pass ? "PASS" : "FAIL") + "\n";
  }
  return out;
}

std::string theory_csv(const Report& report) {
  std::string out = "r,envelope,d_star\n";
  for (const EnvelopeSample& e : report.envelope) {
    long long tenths = static_cast<long long>(e.r.num()) * (10 / static_cast<long long>(e.r.den()));
    out += std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "," +
           e.value.str() + ",";
    if (tenths % 10 == 0) out += report.theory[size_t(tenths / 10) - 1].d.str();
    out += "\n";
  }
  return out;
}

std::string report_json(const Report& report) {
  nlohmann::json out;
  const ExperimentConfig& cfg = report.config;
  out["config"] = {{"K", cfg.K},
                   {"s", cfg.s},
                   {"T", cfg.T},
                   {"N", cfg.N == kAuto ? "auto" : std::to_string(cfg.N)},
                   {"Q", cfg.Q == kAuto ? "auto" : std::to_string(cfg.Q)},
                   {"topology", cfg.topology == ExperimentConfig::Topo::Star ? "star" : "fat-tree"},
                   {"seed", cfg.seed}};
  out["runs"] = nlohmann::json::array();
  for (const RunRow& row : report.rows) {
    nlohmann::json r;
    r["run_id"] = row.run_id;
    r["K"] = row.job.K;
    r["r"] = row.job.r;
    r["s"] = row.job.s;
    r["N"] = row.job.N;
    r["Q"] = row.job.Q;
    r["T"] = row.job.T;
    r["topology"] = row.topology;
    r["t"] = row.arity;
    r["D_measured"] = row.summary.D.str();
    r["D_measured_decimal"] = decimal12(row.summary.D);
    r["D_star"] = row.summary.d_star_val.str();
    r["D_excluding_padding"] = row.summary.D_excl_fill.str();
    r["padding_bits_total"] = row.summary.fill_total.str();
    r["server_layer"] = {{"up_bits", row.summary.server_up_bits},
                         {"down_bits", row.summary.server_down_bits},
                         {"up_nominal", row.summary.server_up_nominal.str()},
                         {"down_nominal", row.summary.server_down_nominal.str()}};
    r["per_layer_max"] = nlohmann::json::object();
    for (const auto& [name, st] : row.summary.layers)
      r["per_layer_max"][name] = {{"bits", st.max_bits}, {"nominal", st.max_nominal.str()}};
    r["checks"] = nlohmann::json::array();
    for (const RunCheck& c : row.summary.checks)
      r["checks"].push_back(
          {{"name", c.name}, {"pass", c.pass}, {"asserted", c.asserted}, {"detail", c.detail}});
    r["decode"] = {{"servers", row.decode_servers}, {"values", row.decode_values}};
    r["flow"] = {{"comparisons", row.flow_comparisons}};
    r["pass"] = row.pass;
    out["runs"].push_back(std::move(r));
  }
  out["theory"] = nlohmann::json::array();
  for (const TheoryRow& t : report.theory)
    out["theory"].push_back({{"r", t.r}, {"l_star", t.l.str()}, {"d_star", t.d.str()}});
  out["envelope"] = nlohmann::json::array();
  for (const EnvelopeSample& e : report.envelope)
    out["envelope"].push_back({{"r", e.r.str()}, {"value", e.value.str()}});
  out["all_pass"] = report.all_pass;
  return out.dump(2) + "\n";
}

void emit(const Report& report, const ExperimentConfig& config) {
  if (!config.dump_topology_path.empty())
    write_file(config.dump_topology_path, report.topology_json_text);
  if (!config.ledger_path.empty()) {
    bool single = report.rows.size() == 1;
    for (const RunRow& row : report.rows) {
      std::string path = single ? config.ledger_path : with_r_suffix(config.ledger_path, row.job.r);
      write_file(path, row.ledger_csv_text);
      write_file(path + ".summary.json", row.ledger_summary_text);
    }
  }
  if (config.out_path.empty()) return;
  if (config.format == "json") {
    write_file(config.out_path, report_json(report));
  } else {
    if (config.theory_only)
      write_file(config.out_path, theory_csv(report));
    else {
      write_file(config.out_path, report_csv(report));
      if (report.rows.size() > 1) write_file(config.out_path + ".theory.csv", theory_csv(report));
    }
  }
}

void render_console(const Report& report, std::ostream& os) {
  for (const RunRow& row : report.rows) {
    os << "[run " << row.run_id << "] " << row.topology;
    if (row.arity != 0) os << "(t=" << row.arity << ")";
    os << " K=" << row.job.K << " r=" << row.job.r << " s=" << row.job.s << " N=" << row.job.N
       << " Q=" << row.job.Q << " T=" << row.job.T << "  D=" << row.summary.D.str() << " ("
       << decimal12(row.summary.D) << ")  D*=" << row.summary.d_star_val.str()
       << "  padding=" << row.summary.fill_total.str() << "  " << (row.pass ? "PASS" : "FAIL")
       << "  [" << static_cast<long long>(row.wall_ms) << " ms]\n";
    for (const RunCheck& c : row.summary.checks)
      if (!c.pass && c.asserted)
        os << "    FAIL " << c.name << ": " << c.detail << "\n";
  }
  if (report.config.theory_only)
    os << "theory curve for K=" << report.config.K << ", s=" << report.config.s << " ("
       << report.envelope.size() << " envelope samples)\n";
  os << (report.all_pass ? "ALL CHECKS PASS" : "CHECKS FAILED") << "\n";
}

}  // namespace tcdc
