#include "curvgraph/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "curvgraph/errors.hpp"

namespace curvgraph {

Graph Graph::from_edges(NodeId num_nodes,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) {
      throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") references a node id out of range [0, " +
                       std::to_string(num_nodes) + ")");
    }
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Graph g;
  g.num_nodes_ = num_nodes;
  g.num_edges_ = directed.size() / 2;
  g.offsets_.assign(num_nodes + 1, 0);
  g.columns_.reserve(directed.size());
  for (const auto& [u, v] : directed) {
    ++g.offsets_[u + 1];
    g.columns_.push_back(v);
  }
  for (NodeId i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  auto nbrs = neighbors(i);
  return std::binary_search(nbrs.begin(), nbrs.end(), j);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(num_edges_);
  for (NodeId i = 0; i < num_nodes_; ++i) {
    for (NodeId j : neighbors(i)) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

void Graph::validate() const {
  if (offsets_.size() != static_cast<std::size_t>(num_nodes_) + 1 ||
      offsets_.front() != 0 || offsets_.back() != columns_.size()) {
    throw InputError("graph: CSR offsets are inconsistent");
  }
  for (NodeId i = 0; i < num_nodes_; ++i) {
    auto nbrs = neighbors(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] >= num_nodes_) throw InputError("graph: column id out of range");
      if (nbrs[k] == i) throw InputError("graph: self-loop in raw adjacency");
      if (k > 0 && nbrs[k - 1] >= nbrs[k]) {
        throw InputError("graph: columns not strictly increasing in row " +
                         std::to_string(i));
      }
      if (!has_edge(nbrs[k], i)) {
        throw InputError("graph: adjacency not symmetric at (" +
                         std::to_string(i) + ", " + std::to_string(nbrs[k]) + ")");
      }
    }
  }
  if (columns_.size() != 2 * num_edges_) {
    throw InputError("graph: edge count does not match adjacency size");
  }
}

std::vector<std::uint16_t> bfs_hops(const Graph& g, NodeId source) {
  std::vector<std::uint16_t> dist(g.num_nodes(), kUnreachableHops);
  dist[source] = 0;
  std::deque<NodeId> queue{source};
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    std::uint16_t next = static_cast<std::uint16_t>(dist[u] + 1);
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachableHops) {
        dist[v] = next;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<std::vector<double>> restricted_distances(
    const Graph& g, std::span<const NodeId> sources,
    std::span<const NodeId> targets) {
  std::vector<std::vector<double>> table(sources.size(),
                                         std::vector<double>(targets.size()));
  // Marks target positions so each BFS can stop early.
  std::vector<std::int32_t> target_pos(g.num_nodes(), -1);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    target_pos[targets[t]] = static_cast<std::int32_t>(t);
  }

  std::vector<std::uint32_t> dist(g.num_nodes());
  constexpr std::uint32_t kUnvisited = 0xFFFFFFFFu;
  std::deque<NodeId> queue;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    std::fill(dist.begin(), dist.end(), kUnvisited);
    auto& row = table[s];
    std::fill(row.begin(), row.end(), kUnreachable);

    std::size_t remaining = targets.size();
    NodeId src = sources[s];
    dist[src] = 0;
    if (target_pos[src] >= 0) {
      for (std::size_t t = 0; t < targets.size(); ++t) {
        if (targets[t] == src) {
          row[t] = 0.0;
          --remaining;
        }
      }
    }
    queue.assign(1, src);
    while (!queue.empty() && remaining > 0) {
      NodeId u = queue.front();
      queue.pop_front();
      std::uint32_t next = dist[u] + 1;
      for (NodeId v : g.neighbors(u)) {
        if (dist[v] != kUnvisited) continue;
        dist[v] = next;
        if (target_pos[v] >= 0) {
          for (std::size_t t = 0; t < targets.size(); ++t) {
            if (targets[t] == v) {
              row[t] = static_cast<double>(next);
              --remaining;
            }
          }
        }
        queue.push_back(v);
      }
    }
  }
  return table;
}

std::uint64_t content_hash(const Graph& g) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t value) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (value >> (8 * byte)) & 0xFF;
      h *= 1099511628211ull;
    }
  };
  mix(g.num_nodes());
  for (std::size_t off : g.offsets()) mix(off);
  for (NodeId c : g.columns()) mix(c);
  return h;
}

}  // namespace curvgraph
