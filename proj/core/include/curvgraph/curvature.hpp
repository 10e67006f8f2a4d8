#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <utility>

#include "curvgraph/graph.hpp"
#include "curvgraph/transport.hpp"

namespace curvgraph {

struct CurvatureConfig {
  // Laziness: probability mass kept at the node itself; the rest spreads
  // uniformly over its neighbors.
  double alpha = 0.5;

  void validate() const;  // requires 0 <= alpha < 1
};

// Canonical undirected edge key: first <= second; (i, i) keys a self-loop.
using EdgeKey = std::pair<NodeId, NodeId>;

inline EdgeKey make_edge_key(NodeId i, NodeId j) {
  return i <= j ? EdgeKey{i, j} : EdgeKey{j, i};
}

// Per-edge curvature keyed by canonical edge. Backed by an ordered map so
// iteration and serialization are deterministic.
class CurvatureMap {
 public:
  using Storage = std::map<EdgeKey, double>;
  using const_iterator = Storage::const_iterator;

  double at(NodeId i, NodeId j) const;  // throws InputError when missing
  bool contains(NodeId i, NodeId j) const {
    return values_.count(make_edge_key(i, j)) > 0;
  }
  void set(NodeId i, NodeId j, double value) {
    values_[make_edge_key(i, j)] = value;
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  const_iterator begin() const { return values_.begin(); }
  const_iterator end() const { return values_.end(); }

  double min_value() const;  // throws InputError when empty

 private:
  Storage values_;
};

// Lazy random-walk measure at node i: mass alpha at i and (1 - alpha) / k on
// each of its k neighbors. A degree-0 node keeps full mass at itself; with
// alpha = 0 the node itself is dropped from the support.
DiscreteMeasure node_measure(const Graph& g, NodeId i,
                             const CurvatureConfig& cfg);

// Curvature of the graph edge (i, j): 1 - W(m_i, m_j) / d(i, j), with hop
// distances as transport costs. d(i, j) is 1 for an edge of an unweighted
// graph, which is the only case evaluated here.
double edge_curvature(const Graph& g, NodeId i, NodeId j,
                      const CurvatureConfig& cfg);

// Curvature of every undirected edge. Edge computations are independent, so
// the result does not depend on the thread count.
CurvatureMap graph_curvature(const Graph& g, const CurvatureConfig& cfg,
                             int threads = 1);

// Cache file layout: one header line
//   #ricci alpha=<value> nodes=<N> edges=<E>
// then per edge "i<TAB>j<TAB>curvature" with i < j and 17 significant digits.
void write_curvature_cache(const std::filesystem::path& path,
                           const CurvatureMap& map, double alpha,
                           NodeId num_nodes);

struct CurvatureCacheFile {
  double alpha = 0.0;
  NodeId num_nodes = 0;
  CurvatureMap map;
};

CurvatureCacheFile read_curvature_cache(const std::filesystem::path& path);

}  // namespace curvgraph
