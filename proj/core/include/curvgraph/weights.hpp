#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "curvgraph/curvature.hpp"
#include "curvgraph/graph.hpp"

namespace curvgraph {

enum class NctmKind { kLinear, kSigmoid, kNone };

// Negative-curvature transformation. Both non-trivial modes are strictly
// increasing, so the relative order of curvature values is preserved.
struct NctmMode {
  NctmKind kind = NctmKind::kLinear;
  // Value assigned to the minimum entry by the linear mode. epsilon = 0
  // zeroes out the minimum-curvature edge, so the default keeps it positive.
  double epsilon = 1.0;

  static NctmMode linear(double epsilon = 1.0) {
    return {NctmKind::kLinear, epsilon};
  }
  static NctmMode sigmoid() { return {NctmKind::kSigmoid, 0.0}; }
  static NctmMode none() { return {NctmKind::kNone, 0.0}; }

  void validate() const;  // epsilon >= 0
};

enum class CnmMode { kFirstHop, kSecondHop, kSymmetric, kNone };

// Directed aggregation weights over the self-looped graph, stored CSR-style.
// Row i holds the neighbors feeding aggregation target i (node i itself
// always included, ids sorted) and their weights tau_ij.
struct WeightedAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> neighbors;
  std::vector<double> tau;

  NodeId num_nodes() const {
    return offsets.empty() ? 0 : static_cast<NodeId>(offsets.size() - 1);
  }
  std::span<const NodeId> row_neighbors(NodeId i) const {
    return {neighbors.data() + offsets[i], neighbors.data() + offsets[i + 1]};
  }
  std::span<const double> row_tau(NodeId i) const {
    return {tau.data() + offsets[i], tau.data() + offsets[i + 1]};
  }
};

// Adds the entry (i, i) -> 1.0 for every node; existing entries unchanged.
// Idempotent.
CurvatureMap inject_self_loops(CurvatureMap map, const Graph& g);

// linear: shift every entry so the minimum (taken over all entries,
// self-loops included) becomes epsilon. sigmoid: elementwise logistic.
// none: identity.
CurvatureMap apply_nctm(CurvatureMap map, const NctmMode& mode);

// Curvature-degree of every node: the sum of transformed curvature over its
// incident edges, self-loop included. Requires self-loops present.
std::vector<double> curvature_degrees(const CurvatureMap& map, const Graph& g);

// Normalizes transformed curvature into aggregation weights:
//   first hop:  tau_ij = r_ij / d_ii   (rows sum to 1)
//   second hop: tau_ij = r_ij / d_jj   (columns sum to 1)
//   symmetric:  tau_ij = r_ij / sqrt(d_ii * d_jj)
//   none:       tau_ij = r_ij
// Throws NormalizationError on a zero degree, or on a non-positive degree
// under the symmetric mode (the square root would be imaginary — the failure
// mode reached when the transformation stage is bypassed on a graph with
// strongly negative curvature).
WeightedAdjacency apply_cnm(const CurvatureMap& map, const Graph& g,
                            CnmMode mode);

// Full pipeline: edge curvature, self-loop injection, transformation,
// normalization — in that order.
WeightedAdjacency build_weights(const Graph& g, const CurvatureConfig& cfg,
                                const NctmMode& nctm, CnmMode cnm,
                                int threads = 1);

// Same pipeline starting from an already-computed raw curvature map.
WeightedAdjacency build_weights(const Graph& g, CurvatureMap raw,
                                const NctmMode& nctm, CnmMode cnm);

// Baseline weight schemes. gcn_weights reproduces the symmetric
// degree-normalized coefficients 1/sqrt((deg_i + 1)(deg_j + 1)), which the
// curvature pipeline recovers when every entry equals 1. identity_weights is
// the no-neighbor scheme (tau_ii = 1 only).
WeightedAdjacency gcn_weights(const Graph& g);
WeightedAdjacency identity_weights(NodeId num_nodes);

}  // namespace curvgraph
