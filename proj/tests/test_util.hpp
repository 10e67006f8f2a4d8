#pragma once

#include <random>
#include <utility>
#include <vector>

#include "curvgraph/graph.hpp"

namespace curvgraph::testutil {

using EdgeVec = std::vector<std::pair<NodeId, NodeId>>;

inline Graph path_graph(NodeId n) {
  EdgeVec edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(NodeId n) {
  EdgeVec edges;
  for (NodeId i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, edges);
}

inline Graph complete_graph(NodeId n) {
  EdgeVec edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph::from_edges(n, edges);
}

// Star with `leaves` leaves; node 0 is the center.
inline Graph star_graph(NodeId leaves) {
  EdgeVec edges;
  for (NodeId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, edges);
}

// side x side grid; node (r, c) has id r * side + c.
inline Graph grid_graph(NodeId side) {
  EdgeVec edges;
  for (NodeId r = 0; r < side; ++r) {
    for (NodeId c = 0; c < side; ++c) {
      NodeId id = r * side + c;
      if (c + 1 < side) edges.emplace_back(id, id + 1);
      if (r + 1 < side) edges.emplace_back(id, id + side);
    }
  }
  return Graph::from_edges(side * side, edges);
}

inline Graph random_graph(NodeId n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  EdgeVec edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (uniform(rng) < p) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace curvgraph::testutil
