#include <random>

#include "curvgraph/errors.hpp"
#include "curvgraph/graph.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace curvgraph;
using namespace curvgraph::testutil;

TEST_CASE("from_edges collapses duplicates and drops self-loops") {
  EdgeVec edges = {{0, 1}, {1, 0}, {1, 1}};
  Graph g = Graph::from_edges(2, edges);
  CHECK(g.num_nodes() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 1);
  CHECK(g.has_edge(0, 1));
  g.validate();
}

TEST_CASE("from_edges with no edges leaves isolated nodes") {
  Graph g = Graph::from_edges(3, EdgeVec{});
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 0);
  for (NodeId i = 0; i < 3; ++i) CHECK(g.degree(i) == 0);
}

TEST_CASE("triangle degrees") {
  Graph g = complete_graph(3);
  CHECK(g.num_edges() == 3);
  for (NodeId i = 0; i < 3; ++i) CHECK(g.degree(i) == 2);
}

TEST_CASE("from_edges rejects out-of-range ids") {
  EdgeVec edges = {{0, 5}};
  CHECK_THROWS_AS(Graph::from_edges(3, edges), InputError);
}

TEST_CASE("rebuilding from the emitted edge list is an identity") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 20; ++round) {
    Graph g = random_graph(30, 0.2, rng);
    Graph h = Graph::from_edges(g.num_nodes(), g.edge_list());
    CHECK(g.offsets() == h.offsets());
    CHECK(g.columns() == h.columns());
  }
}

TEST_CASE("restricted_distances on a path") {
  Graph g = path_graph(3);
  std::vector<NodeId> sources{0}, targets{2};
  auto table = restricted_distances(g, sources, targets);
  CHECK(table[0][0] == 2.0);
}

TEST_CASE("restricted_distances source equals target") {
  Graph g = path_graph(4);
  std::vector<NodeId> sources{1}, targets{1, 3};
  auto table = restricted_distances(g, sources, targets);
  CHECK(table[0][0] == 0.0);
  CHECK(table[0][1] == 2.0);
}

TEST_CASE("restricted_distances across components is infinite") {
  Graph g = Graph::from_edges(4, EdgeVec{{0, 1}, {2, 3}});
  std::vector<NodeId> sources{0}, targets{3};
  auto table = restricted_distances(g, sources, targets);
  CHECK(table[0][0] == kUnreachable);
}

TEST_CASE("distance symmetry and triangle inequality on random graphs") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 10; ++round) {
    Graph g = random_graph(18, 0.18, rng);
    std::vector<NodeId> all;
    for (NodeId i = 0; i < g.num_nodes(); ++i) all.push_back(i);
    auto table = restricted_distances(g, all, all);
    for (NodeId a = 0; a < g.num_nodes(); ++a) {
      for (NodeId b = 0; b < g.num_nodes(); ++b) {
        CHECK(table[a][b] == table[b][a]);
      }
    }
    std::uniform_int_distribution<NodeId> pick(0, g.num_nodes() - 1);
    for (int t = 0; t < 50; ++t) {
      NodeId a = pick(rng), b = pick(rng), c = pick(rng);
      CHECK(table[a][c] <= table[a][b] + table[b][c]);
    }
  }
}

TEST_CASE("bfs_hops agrees with restricted_distances") {
  std::mt19937_64 rng(3);
  Graph g = random_graph(25, 0.15, rng);
  std::vector<NodeId> all;
  for (NodeId i = 0; i < g.num_nodes(); ++i) all.push_back(i);
  auto table = restricted_distances(g, all, all);
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    auto hops = bfs_hops(g, s);
    for (NodeId t = 0; t < g.num_nodes(); ++t) {
      double expected = hops[t] == kUnreachableHops
                            ? kUnreachable
                            : static_cast<double>(hops[t]);
      CHECK(table[s][t] == expected);
    }
  }
}

TEST_CASE("content_hash distinguishes graphs") {
  Graph a = path_graph(5);
  Graph b = cycle_graph(5);
  CHECK(content_hash(a) != content_hash(b));
  CHECK(content_hash(a) == content_hash(path_graph(5)));
}
