#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "curvgraph/graph.hpp"

namespace curvgraph {

// Row i is the feature vector of node i.
using FeatureMatrix = Eigen::MatrixXd;

// Per-node class ids in [0, C).
using LabelVector = std::vector<std::int32_t>;

using Mask = std::vector<std::uint8_t>;

struct SplitMasks {
  Mask train;
  Mask val;
  Mask test;

  // Checks sizes against the node count and pairwise disjointness.
  void validate(std::size_t num_nodes) const;
};

std::size_t mask_count(const Mask& m);
std::vector<NodeId> mask_indices(const Mask& m);

// 1 + max label; 0 for an empty vector.
int num_classes(const LabelVector& labels);

struct DatasetBundle {
  Graph graph;
  FeatureMatrix features;
  LabelVector labels;
  SplitMasks splits;
  std::string name;

  void validate() const;
};

}  // namespace curvgraph
