#pragma once

#include <cstdint>
#include <utility>

#include "curvgraph/dataset.hpp"
#include "curvgraph/graph.hpp"

namespace curvgraph {

struct SbmSpec {
  NodeId n = 1000;
  int blocks = 5;
  double p_intra = 0.15;
  double q_inter = 0.025;
  std::uint64_t seed = 2020;

  void validate() const;  // probabilities in [0, 1], n divisible by blocks
};

// Stochastic block model over equally sized contiguous blocks: each
// intra-block pair is an edge with probability p, each inter-block pair with
// probability q, all independently. Labels are the block ids.
std::pair<Graph, LabelVector> gen_sbm(const SbmSpec& spec);

// Erdos-Renyi: every pair independently with probability p. With p == q this
// is exactly the block model's distribution (same seed gives the same graph).
Graph gen_er(NodeId n, double p, std::uint64_t seed);

// Preferential attachment: an m-node seed clique, then each arriving node
// attaches m edges to existing nodes with probability proportional to their
// current degree, sampled without replacement per arrival. Node ids are
// arrival order.
Graph gen_ba(NodeId n, NodeId m, std::uint64_t seed);

// Node ids split into `classes` equal contiguous blocks. For preferential-
// attachment graphs this ties labels to arrival time, so label blocks retain
// a structural (degree/age) signal; block-model labels coincide with the
// communities by construction.
LabelVector block_labels(NodeId n, int classes);

// Standard-normal features plus the stratified split protocol:
// `train_per_class` nodes per class for training, `val_count` for
// validation, the rest for testing. Throws InputError when a class is
// smaller than train_per_class.
std::pair<FeatureMatrix, SplitMasks> gen_features_and_splits(
    const LabelVector& labels, int feature_dim, std::uint64_t seed,
    int train_per_class = 20, int val_count = 300);

}  // namespace curvgraph
