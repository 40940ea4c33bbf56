#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcdc/job.hpp"
#include "tcdc/rational.hpp"
#include "tcdc/shuffle.hpp"
#include "tcdc/topology.hpp"

namespace tcdc {

// Per-link bit accounting. Every transmission charges its actual payload
// bits (an integer) and its nominal share (the exact rational the scheme
// would send if payloads divided evenly); the difference is zero fill.
class LinkLedger {
 public:
  LinkLedger() = default;
  explicit LinkLedger(const Topology& topo);

  const Topology& topology() const { return *topo_; }
  size_t link_count() const { return up_bits_.size(); }

  void charge_up(int link, uint64_t bits, const Rational& nominal);
  void charge_down(int link, uint64_t bits, const Rational& nominal);

  uint64_t up_bits(int link) const { return up_bits_[link]; }
  uint64_t down_bits(int link) const { return down_bits_[link]; }
  uint64_t total_bits(int link) const { return up_bits_[link] + down_bits_[link]; }
  const Rational& up_nominal(int link) const { return up_nominal_[link]; }
  const Rational& down_nominal(int link) const { return down_nominal_[link]; }
  Rational total_nominal(int link) const { return up_nominal_[link] + down_nominal_[link]; }
  Rational fill_bits(int link) const {
    return Rational(static_cast<long long>(total_bits(link))) - total_nominal(link);
  }

 private:
  const Topology* topo_ = nullptr;
  std::vector<uint64_t> up_bits_, down_bits_;
  std::vector<Rational> up_nominal_, down_nominal_;
};

struct FlowStats {
  long long comparisons = 0;  // switch emissions checked against receive buffers
};

// A unit travelling the network: a whole message or one of its pieces.
struct UnitKey {
  int sender = 0;
  uint64_t mask = 0;
  int j = 0, d = 0;
  bool operator==(const UnitKey& o) const {
    return sender == o.sender && mask == o.mask && j == o.j && d == o.d;
  }
};

struct UnitKeyHash {
  size_t operator()(const UnitKey& k) const;
};

// What every switch has received so far; emissions are verified to be
// bit-exact cuts of entries here, so switches provably never invent bits.
struct SwitchBuffers {
  std::vector<std::unordered_map<UnitKey, BitVec, UnitKeyHash>> at;
};

struct StarResult {
  LinkLedger ledger;
  std::vector<std::vector<const SubMessage*>> delivered;  // index k-1
  FlowStats flow;
};

// Single switch: every sender pushes its messages up, the switch forwards to
// each server exactly its useful set.
StarResult shuffle_star(const MessageSet& messages, const Topology& topo);

struct UplinkState {
  LinkLedger ledger;
  SwitchBuffers buffers;
  FlowStats flow;
  long long piece_len = 0;
  long long sub_len = 0;
};

// Servers -> edges -> aggregations -> cores. Edges cut each message into t/2
// equal pieces (one per aggregation), aggregations cut pieces into t/2
// sub-pieces (one per reachable core). Throws SplitError if payload sizes do
// not divide (build_messages with granularity (t/2)^2 guarantees they do).
UplinkState uplink_fat_tree(const MessageSet& messages, const Topology& topo,
                            const ServerMap& smap);

struct FatTreeResult {
  LinkLedger ledger;
  FlowStats flow;
  std::vector<std::vector<SubMessage>> delivered;  // reassembled, index k-1
};

// Cores send each sub-piece to the pods that need it (skipping the sender's
// own pod, whose aggregations kept their uplink copies); aggregations and
// edges forward towards every server in the piece's useful set, and each
// server receives its reassembled useful messages. Throws DeliveryError if
// any server's assembled set differs from its useful set.
FatTreeResult downlink_fat_tree(UplinkState state, const Topology& topo, const ServerMap& smap,
                                const MessageSet& messages);

struct RunCheck {
  std::string name;
  bool pass = false;
  bool asserted = true;  // informational rows don't gate the verdict
  std::string detail;
};

struct LayerStat {
  uint64_t max_bits = 0;
  Rational max_nominal;
};

struct LedgerSummary {
  Rational D;               // max over links of total bits / QNT
  Rational D_excl_fill;     // same with zero-fill bits excluded
  Rational d_star_val;
  Rational eps_fill;        // max over links of fill / QNT
  Rational fill_total;      // zero-fill bits charged across all links
  uint64_t server_up_bits = 0, server_down_bits = 0;
  Rational server_up_nominal, server_down_nominal;
  std::vector<std::pair<std::string, LayerStat>> layers;
  std::vector<RunCheck> checks;
  bool all_pass = true;
};

// Evaluates every per-link bound, the totals, and (at full occupancy) the
// max-load optimality certificate and the layer ordering.
LedgerSummary ledger_summary(const LinkLedger& ledger, const JobSpec& job, bool full_occupancy);

std::string ledger_csv(const LinkLedger& ledger);
std::string ledger_summary_json(const LedgerSummary& s);

}  // namespace tcdc
