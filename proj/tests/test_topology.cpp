#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <vector>

#include "json.hpp"

#include "tcdc/topology.hpp"

using namespace tcdc;

namespace {

std::map<int, int> degrees(const Topology& topo) {
  std::map<int, int> deg;
  for (const Link& l : topo.links) {
    ++deg[l.lower];
    ++deg[l.upper];
  }
  return deg;
}

}  // namespace

TEST_CASE("smallest adequate arity") {
  CHECK(choose_arity(1) == 2);
  CHECK(choose_arity(2) == 2);
  CHECK(choose_arity(3) == 4);
  CHECK(choose_arity(16) == 4);
  CHECK(choose_arity(17) == 6);
  CHECK(choose_arity(20) == 6);
  CHECK(choose_arity(54) == 6);
  CHECK(choose_arity(55) == 8);
  CHECK(choose_arity(128) == 8);
  CHECK_THROWS_AS(choose_arity(0), ArityError);
}

TEST_CASE("star wiring") {
  Topology topo = build_star(4);
  CHECK(topo.kind == Topology::Kind::Star);
  CHECK(topo.arity == 0);
  CHECK(topo.slot_count() == 4);
  REQUIRE(topo.nodes.size() == 5);
  REQUIRE(topo.links.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(topo.nodes[k].kind == NodeKind::Server);
    CHECK(topo.links[k].lower == k);
    CHECK(topo.links[k].upper == topo.star_switch_node());
    CHECK(topo.layers[k] == LinkLayer::ServerEdge);
  }
  CHECK(topo.node_label(0) == "w_1");
  CHECK(topo.node_label(4) == "switch");
  CHECK(degrees(topo)[topo.star_switch_node()] == 4);
  CHECK_THROWS_AS(build_star(0), RangeError);
}

TEST_CASE("four-ary fat-tree: counts and canonical order") {
  Topology topo = build_fat_tree(4);
  CHECK(topo.slot_count() == 16);
  CHECK(topo.nodes.size() == 36);   // 16 servers + 8 edges + 8 aggregations + 4 cores
  CHECK(topo.links.size() == 48);   // 3 * t^3/4

  int per_layer[3] = {0, 0, 0};
  for (LinkLayer l : topo.layers) ++per_layer[(int)l];
  CHECK(per_layer[0] == 16);
  CHECK(per_layer[1] == 16);
  CHECK(per_layer[2] == 16);

  // Server links first, in slot order.
  for (int slot = 0; slot < 16; ++slot) {
    CHECK(topo.links[slot].lower == slot);
    CHECK(topo.links[slot].upper == topo.edge_node(topo.slot_pod(slot), topo.slot_edge(slot)));
  }
  // Then edge-aggregation, (pod, edge, aggregation) lexicographic.
  int id = 16;
  for (int i = 1; i <= 4; ++i)
    for (int p = 1; p <= 2; ++p)
      for (int j = 1; j <= 2; ++j, ++id) {
        CHECK(topo.edge_agg_link(i, p, j) == id);
        CHECK(topo.links[id].lower == topo.edge_node(i, p));
        CHECK(topo.links[id].upper == topo.agg_node(i, j));
        CHECK(topo.layers[id] == LinkLayer::EdgeAgg);
      }
  // Then aggregation-core: a_{i,j} reaches cores (j-1)h+1 .. jh.
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int d = 1; d <= 2; ++d, ++id) {
        CHECK(topo.agg_core_link(i, j, d) == id);
        CHECK(topo.links[id].lower == topo.agg_node(i, j));
        CHECK(topo.links[id].upper == topo.core_node((j - 1) * 2 + d));
        CHECK(topo.layers[id] == LinkLayer::AggCore);
      }
  CHECK(id == 48);
}

TEST_CASE("every switch of a t-ary fat-tree has degree t") {
  for (int t : {2, 4, 6, 8}) {
    Topology topo = build_fat_tree(t);
    CHECK((int)topo.links.size() == 3 * t * t * t / 4);
    auto deg = degrees(topo);
    for (size_t id = 0; id < topo.nodes.size(); ++id) {
      if (topo.nodes[id].kind == NodeKind::Server)
        CHECK(deg[(int)id] == 1);
      else
        CHECK(deg[(int)id] == t);
    }
  }
  CHECK_THROWS_AS(build_fat_tree(3), ArityError);
  CHECK_THROWS_AS(build_fat_tree(0), ArityError);
}

TEST_CASE("binary fat-tree, fully explicit") {
  Topology topo = build_fat_tree(2);
  CHECK(topo.slot_count() == 2);
  REQUIRE(topo.nodes.size() == 7);  // 2 servers, 2 edges, 2 aggregations, 1 core
  REQUIRE(topo.links.size() == 6);
  CHECK(topo.slot_pod(0) == 1);
  CHECK(topo.slot_pod(1) == 2);
  CHECK(topo.links[0].lower == 0);
  CHECK(topo.links[0].upper == topo.edge_node(1, 1));
  CHECK(topo.links[1].lower == 1);
  CHECK(topo.links[1].upper == topo.edge_node(2, 1));
  CHECK(topo.links[2].lower == topo.edge_node(1, 1));
  CHECK(topo.links[2].upper == topo.agg_node(1, 1));
  CHECK(topo.links[4].lower == topo.agg_node(1, 1));
  CHECK(topo.links[4].upper == topo.core_node(1));
  CHECK(topo.links[5].lower == topo.agg_node(2, 1));
  CHECK(topo.links[5].upper == topo.core_node(1));
}

TEST_CASE("node labels name pod, group and position") {
  Topology topo = build_fat_tree(4);
  CHECK(topo.node_label(0) == "w_1_1_1");
  CHECK(topo.node_label(5) == "w_2_1_2");
  CHECK(topo.node_label(15) == "w_4_2_2");
  CHECK(topo.node_label(topo.edge_node(1, 1)) == "e_1_1");
  CHECK(topo.node_label(topo.edge_node(3, 2)) == "e_3_2");
  CHECK(topo.node_label(topo.agg_node(2, 2)) == "a_2_2");
  CHECK(topo.node_label(topo.core_node(3)) == "c_3");
}

TEST_CASE("server placement fills slots left to right") {
  Topology topo = build_fat_tree(4);
  ServerMap map = place_servers(topo, 10);
  CHECK(map.K == 10);
  for (int k = 1; k <= 10; ++k) {
    CHECK(map.server_slot[k - 1] == k - 1);
    CHECK(map.slot_server[k - 1] == k);
  }
  for (int slot = 10; slot < 16; ++slot) CHECK(map.slot_server[slot] == 0);
  CHECK_THROWS_AS(place_servers(topo, 17), CapacityError);
  CHECK_THROWS_AS(place_servers(topo, 0), RangeError);
}

TEST_CASE("topology JSON is parseable, complete and byte-stable") {
  Topology topo = build_fat_tree(4);
  std::string text = topology_json(topo);
  CHECK(text == topology_json(topo));
  CHECK(text == topology_json(build_fat_tree(4)));

  nlohmann::json doc = nlohmann::json::parse(text);
  CHECK(doc["kind"] == "fat-tree");
  CHECK(doc["arity"] == 4);
  REQUIRE(doc["nodes"].size() == 36);
  REQUIRE(doc["links"].size() == 48);
  CHECK(doc["nodes"][0]["type"] == "server");
  CHECK(doc["nodes"][0]["label"] == "w_1_1_1");
  CHECK(doc["nodes"][35]["type"] == "core");
  CHECK(doc["links"][0]["lower"] == 0);
  CHECK(doc["links"][0]["upper"] == 16);
  CHECK(doc["links"][0]["layer"] == "server_edge");
  CHECK(doc["links"][47]["layer"] == "agg_core");

  nlohmann::json star = nlohmann::json::parse(topology_json(build_star(3)));
  CHECK(star["kind"] == "star");
  CHECK(star["nodes"].size() == 4);
  CHECK(star["nodes"][3]["type"] == "switch");
}

TEST_CASE("adjacency fingerprint is stable and layout-sensitive") {
  CHECK(adjacency_hash(build_fat_tree(4)) == adjacency_hash(build_fat_tree(4)));
  CHECK(adjacency_hash(build_fat_tree(4)) != adjacency_hash(build_fat_tree(6)));
  CHECK(adjacency_hash(build_star(4)) != adjacency_hash(build_star(5)));
  CHECK(adjacency_hash(build_star(16)) != adjacency_hash(build_fat_tree(4)));
}
