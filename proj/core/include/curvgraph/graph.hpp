#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace curvgraph {

using NodeId = std::uint32_t;

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr std::uint16_t kUnreachableHops = 0xFFFF;

// Immutable undirected graph in CSR form. Every edge is stored in both
// directions, column indices within a row are strictly increasing, and the
// raw adjacency never contains self-loops (aggregation self-loops are
// injected later, by the weight pipeline). Safe to share across threads.
class Graph {
 public:
  Graph() = default;

  // Builds the CSR from an arbitrary edge list: self-loops are dropped,
  // duplicates (in either direction) collapse to one undirected edge, and
  // the reverse direction is added. Throws InputError on ids >= num_nodes.
  static Graph from_edges(NodeId num_nodes,
                          std::span<const std::pair<NodeId, NodeId>> edges);

  NodeId num_nodes() const noexcept { return num_nodes_; }

  // Number of undirected edges.
  std::size_t num_edges() const noexcept { return num_edges_; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {columns_.data() + offsets_[i], columns_.data() + offsets_[i + 1]};
  }

  NodeId degree(NodeId i) const {
    return static_cast<NodeId>(offsets_[i + 1] - offsets_[i]);
  }

  bool has_edge(NodeId i, NodeId j) const;

  const std::vector<std::size_t>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& columns() const noexcept { return columns_; }

  // Canonical (i < j) edge list in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edge_list() const;

  // Re-checks the CSR invariants; throws InputError on violation.
  void validate() const;

 private:
  NodeId num_nodes_ = 0;
  std::size_t num_edges_ = 0;
  std::vector<std::size_t> offsets_ = {0};
  std::vector<NodeId> columns_;
};

// Hop distance from every source to every target. Breadth-first search per
// source, stopping once all targets have been reached; unreachable pairs get
// kUnreachable. table[s][t] pairs with sources[s], targets[t].
std::vector<std::vector<double>> restricted_distances(
    const Graph& g, std::span<const NodeId> sources,
    std::span<const NodeId> targets);

// Hop distances from `source` to every node (kUnreachableHops if none).
std::vector<std::uint16_t> bfs_hops(const Graph& g, NodeId source);

// FNV-1a over node count and CSR arrays. Keys on-disk curvature caches.
std::uint64_t content_hash(const Graph& g);

}  // namespace curvgraph
