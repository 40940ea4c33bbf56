#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tcdc/errors.hpp"

namespace tcdc {

enum class NodeKind { Server, Edge, Aggregation, Core, StarSwitch };

struct Node {
  NodeKind kind;
  int pod;    // 1-based; 0 for cores and star nodes
  int index;  // 1-based ordinal within its kind
};

// Directed bottom-up: traffic on (lower -> upper) is uplink, the reverse is
// downlink. Links are indexed canonically: all server-edge links left to
// right, then edge-aggregation, then aggregation-core.
struct Link {
  int lower;
  int upper;
};

enum class LinkLayer { ServerEdge, EdgeAgg, AggCore };

std::string layer_name(LinkLayer layer);

class Topology {
 public:
  enum class Kind { Star, FatTree };

  Kind kind = Kind::Star;
  int arity = 0;  // t; 0 for the star
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<LinkLayer> layers;  // per link

  int slot_count() const { return slot_count_; }
  int half() const { return arity / 2; }

  // Slots are 0-based, everything else 1-based.
  int server_node(int slot) const { return slot; }
  int server_link(int slot) const { return slot; }

  int edge_node(int i, int p) const;
  int agg_node(int i, int j) const;
  int core_node(int m) const;
  int star_switch_node() const;

  int edge_agg_link(int i, int p, int j) const;
  int agg_core_link(int i, int j, int d) const;

  // Pod / edge-group of a slot.
  int slot_pod(int slot) const { return slot / (half() * half()) + 1; }
  int slot_edge(int slot) const { return (slot / half()) % half() + 1; }

  std::string node_label(int id) const;

 private:
  friend Topology build_star(int K);
  friend Topology build_fat_tree(int t);
  int slot_count_ = 0;
};

// Smallest even t >= 2 whose three-layer fat-tree offers t^3/4 >= K slots.
int choose_arity(long long K);

Topology build_star(int K);
Topology build_fat_tree(int t);

// Which server (1-based) sits in which slot; 0 marks an empty slot. Servers
// fill slots left to right.
struct ServerMap {
  int K = 0;
  std::vector<int> slot_server;  // per slot, 0 = empty
  std::vector<int> server_slot;  // index k-1 -> slot
};

ServerMap place_servers(const Topology& topo, int K);

// Deterministic JSON description (nodes with id/type/pod/index, links with
// id/lower/upper).
std::string topology_json(const Topology& topo);

// Stable fingerprint of the canonical node/link layout.
uint64_t adjacency_hash(const Topology& topo);

}  // namespace tcdc
