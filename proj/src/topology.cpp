#include "tcdc/topology.hpp"

#include <string>

#include "json.hpp"

#include "tcdc/hash.hpp"

namespace tcdc {

std::string layer_name(LinkLayer layer) {
  switch (layer) {
    case LinkLayer::ServerEdge: return "server_edge";
    case LinkLayer::EdgeAgg: return "edge_agg";
    case LinkLayer::AggCore: return "agg_core";
  }
  return "?";
}

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Server: return "server";
    case NodeKind::Edge: return "edge";
    case NodeKind::Aggregation: return "aggregation";
    case NodeKind::Core: return "core";
    case NodeKind::StarSwitch: return "switch";
  }
  return "?";
}

}  // namespace

int Topology::edge_node(int i, int p) const {
  return slot_count_ + (i - 1) * half() + (p - 1);
}

int Topology::agg_node(int i, int j) const {
  return slot_count_ + arity * half() + (i - 1) * half() + (j - 1);
}

int Topology::core_node(int m) const {
  return slot_count_ + 2 * arity * half() + (m - 1);
}

int Topology::star_switch_node() const { return slot_count_; }

int Topology::edge_agg_link(int i, int p, int j) const {
  int h = half();
  return slot_count_ + ((i - 1) * h + (p - 1)) * h + (j - 1);
}

int Topology::agg_core_link(int i, int j, int d) const {
  int h = half();
  return slot_count_ + arity * h * h + ((i - 1) * h + (j - 1)) * h + (d - 1);
}

std::string Topology::node_label(int id) const {
  const Node& n = nodes[id];
  switch (n.kind) {
    case NodeKind::StarSwitch:
      return "switch";
    case NodeKind::Server: {
      if (kind == Kind::Star) return "w_" + std::to_string(n.index);
      int h = half();
      int slot = n.index - 1;
      return "w_" + std::to_string(slot_pod(slot)) + "_" + std::to_string(slot_edge(slot)) +
             "_" + std::to_string(slot % h + 1);
    }
    case NodeKind::Edge:
      return "e_" + std::to_string(n.pod) + "_" + std::to_string((n.index - 1) % half() + 1);
    case NodeKind::Aggregation:
      return "a_" + std::to_string(n.pod) + "_" + std::to_string((n.index - 1) % half() + 1);
    case NodeKind::Core:
      return "c_" + std::to_string(n.index);
  }
  return "?";
}

int choose_arity(long long K) {
  if (K < 1) throw ArityError("choose_arity: need at least one server");
  for (long long t = 2;; t += 2) {
    if (t * t * t / 4 >= K) {
      if (t > (1 << 15)) throw ArityError("choose_arity: arity out of range");
      return static_cast<int>(t);
    }
  }
}

Topology build_star(int K) {
  if (K < 1) throw RangeError("build_star: need at least one server");
  Topology topo;
  topo.kind = Topology::Kind::Star;
  topo.arity = 0;
  topo.slot_count_ = K;
  for (int k = 1; k <= K; ++k) topo.nodes.push_back({NodeKind::Server, 0, k});
  topo.nodes.push_back({NodeKind::StarSwitch, 0, 1});
  for (int k = 0; k < K; ++k) {
    topo.links.push_back({k, K});
    topo.layers.push_back(LinkLayer::ServerEdge);
  }
  return topo;
}

Topology build_fat_tree(int t) {
  if (t < 2 || t % 2 != 0) throw ArityError("build_fat_tree: arity must be even and >= 2");
  Topology topo;
  topo.kind = Topology::Kind::FatTree;
  topo.arity = t;
  int h = t / 2;
  topo.slot_count_ = t * h * h;  // t pods, h edges each, h slots each

  // Nodes: slots, then edges, aggregations, cores -- each left to right.
  for (int slot = 0; slot < topo.slot_count_; ++slot)
    topo.nodes.push_back({NodeKind::Server, topo.slot_pod(slot), slot + 1});
  for (int i = 1; i <= t; ++i)
    for (int p = 1; p <= h; ++p)
      topo.nodes.push_back({NodeKind::Edge, i, (i - 1) * h + p});
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j <= h; ++j)
      topo.nodes.push_back({NodeKind::Aggregation, i, (i - 1) * h + j});
  for (int m = 1; m <= h * h; ++m) topo.nodes.push_back({NodeKind::Core, 0, m});

  // Links in canonical order. Server-edge first:
  for (int slot = 0; slot < topo.slot_count_; ++slot) {
    topo.links.push_back({slot, topo.edge_node(topo.slot_pod(slot), topo.slot_edge(slot))});
    topo.layers.push_back(LinkLayer::ServerEdge);
  }
  // Edge-aggregation: every edge of pod i reaches every aggregation of pod i.
  for (int i = 1; i <= t; ++i)
    for (int p = 1; p <= h; ++p)
      for (int j = 1; j <= h; ++j) {
        topo.links.push_back({topo.edge_node(i, p), topo.agg_node(i, j)});
        topo.layers.push_back(LinkLayer::EdgeAgg);
      }
  // Aggregation-core: a_{i,j} reaches cores (j-1)h+1 .. jh.
  for (int i = 1; i <= t; ++i)
    for (int j = 1; j <= h; ++j)
      for (int d = 1; d <= h; ++d) {
        topo.links.push_back({topo.agg_node(i, j), topo.core_node((j - 1) * h + d)});
        topo.layers.push_back(LinkLayer::AggCore);
      }
  return topo;
}

ServerMap place_servers(const Topology& topo, int K) {
  if (K < 1) throw RangeError("place_servers: need at least one server");
  if (K > topo.slot_count())
    throw CapacityError("place_servers: " + std::to_string(K) + " servers but only " +
                        std::to_string(topo.slot_count()) + " slots");
  ServerMap map;
  map.K = K;
  map.slot_server.assign(topo.slot_count(), 0);
  map.server_slot.resize(K);
  for (int k = 1; k <= K; ++k) {
    map.slot_server[k - 1] = k;
    map.server_slot[k - 1] = k - 1;
  }
  return map;
}

std::string topology_json(const Topology& topo) {
  nlohmann::json out;
  out["kind"] = topo.kind == Topology::Kind::Star ? "star" : "fat-tree";
  out["arity"] = topo.arity;
  out["nodes"] = nlohmann::json::array();
  for (size_t id = 0; id < topo.nodes.size(); ++id) {
    const Node& n = topo.nodes[id];
    out["nodes"].push_back({{"id", id},
                            {"type", kind_name(n.kind)},
                            {"pod", n.pod},
                            {"index", n.index},
                            {"label", topo.node_label(static_cast<int>(id))}});
  }
  out["links"] = nlohmann::json::array();
  for (size_t id = 0; id < topo.links.size(); ++id)
    out["links"].push_back({{"id", id},
                            {"lower", topo.links[id].lower},
                            {"upper", topo.links[id].upper},
                            {"layer", layer_name(topo.layers[id])}});
  return out.dump(2) + "\n";
}

uint64_t adjacency_hash(const Topology& topo) {
  uint64_t h = mix64(topo.kind == Topology::Kind::Star ? 1 : 2);
  h = hash_combine(h, uint64_t(topo.arity));
  for (const Node& n : topo.nodes) {
    h = hash_combine(h, uint64_t(static_cast<int>(n.kind)));
    h = hash_combine(h, uint64_t(n.pod));
    h = hash_combine(h, uint64_t(n.index));
  }
  for (size_t i = 0; i < topo.links.size(); ++i) {
    h = hash_combine(h, uint64_t(topo.links[i].lower));
    h = hash_combine(h, uint64_t(topo.links[i].upper));
    h = hash_combine(h, uint64_t(static_cast<int>(topo.layers[i])));
  }
  return h;
}

}  // namespace tcdc
