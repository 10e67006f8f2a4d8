#include "curvgraph/synth.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "curvgraph/errors.hpp"

namespace curvgraph {

void SbmSpec::validate() const {
  if (!(p_intra >= 0.0 && p_intra <= 1.0) ||
      !(q_inter >= 0.0 && q_inter <= 1.0)) {
    throw InputError("sbm: probabilities must lie in [0, 1]");
  }
  if (blocks < 1 || n == 0 || n % static_cast<NodeId>(blocks) != 0) {
    throw InputError("sbm: node count must split into equal blocks");
  }
}

namespace {

// Shared pair sampler so gen_er(p) and gen_sbm(p == q) draw identically.
template <typename ProbFn>
Graph sample_pair_graph(NodeId n, std::uint64_t seed, ProbFn prob) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (uniform(rng) < prob(i, j)) edges.emplace_back(i, j);
    }
  }
  return Graph::from_edges(n, edges);
}

}  // namespace

std::pair<Graph, LabelVector> gen_sbm(const SbmSpec& spec) {
  spec.validate();
  const NodeId block_size = spec.n / static_cast<NodeId>(spec.blocks);
  Graph g = sample_pair_graph(spec.n, spec.seed, [&](NodeId i, NodeId j) {
    return (i / block_size == j / block_size) ? spec.p_intra : spec.q_inter;
  });
  return {std::move(g), block_labels(spec.n, spec.blocks)};
}

Graph gen_er(NodeId n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("er: probability must lie in [0, 1]");
  }
  return sample_pair_graph(n, seed, [p](NodeId, NodeId) { return p; });
}

Graph gen_ba(NodeId n, NodeId m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw InputError("ba: need 1 <= m < n");
  std::mt19937_64 rng(seed);

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(m) * (n - m) + m * (m - 1) / 2);
  // Each node appears once per incident edge; sampling an index uniformly
  // from this list picks a node with probability proportional to its degree.
  std::vector<NodeId> chances;

  for (NodeId i = 0; i < m; ++i) {
    for (NodeId j = i + 1; j < m; ++j) {
      edges.emplace_back(i, j);
      chances.push_back(i);
      chances.push_back(j);
    }
  }

  std::vector<NodeId> picked;
  for (NodeId t = m; t < n; ++t) {
    picked.clear();
    while (picked.size() < m) {
      NodeId candidate;
      if (chances.empty()) {
        // All existing nodes have degree zero (m = 1 seed): fall back to a
        // uniform pick.
        candidate = static_cast<NodeId>(
            std::uniform_int_distribution<NodeId>(0, t - 1)(rng));
      } else {
        candidate = chances[std::uniform_int_distribution<std::size_t>(
            0, chances.size() - 1)(rng)];
      }
      if (std::find(picked.begin(), picked.end(), candidate) == picked.end()) {
        picked.push_back(candidate);
      }
    }
    for (NodeId target : picked) {
      edges.emplace_back(t, target);
      chances.push_back(t);
      chances.push_back(target);
    }
  }
  return Graph::from_edges(n, edges);
}

LabelVector block_labels(NodeId n, int classes) {
  if (classes < 1 || n % static_cast<NodeId>(classes) != 0) {
    throw InputError("labels: node count must split into equal classes");
  }
  const NodeId block_size = n / static_cast<NodeId>(classes);
  LabelVector labels(n);
  for (NodeId i = 0; i < n; ++i) {
    labels[i] = static_cast<std::int32_t>(i / block_size);
  }
  return labels;
}

std::pair<FeatureMatrix, SplitMasks> gen_features_and_splits(
    const LabelVector& labels, int feature_dim, std::uint64_t seed,
    int train_per_class, int val_count) {
  const auto n = static_cast<NodeId>(labels.size());
  const int classes = num_classes(labels);
  if (feature_dim < 1) throw InputError("features: dimension must be >= 1");
  if (classes < 1) throw InputError("features: labels are empty");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureMatrix features(n, feature_dim);
  for (NodeId i = 0; i < n; ++i) {
    for (int f = 0; f < feature_dim; ++f) features(i, f) = normal(rng);
  }

  SplitMasks splits;
  splits.train.assign(n, 0);
  splits.val.assign(n, 0);
  splits.test.assign(n, 0);

  for (int c = 0; c < classes; ++c) {
    std::vector<NodeId> members;
    for (NodeId i = 0; i < n; ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    if (static_cast<int>(members.size()) < train_per_class) {
      throw InputError("splits: class " + std::to_string(c) + " has only " +
                       std::to_string(members.size()) + " members, need " +
                       std::to_string(train_per_class));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (int k = 0; k < train_per_class; ++k) splits.train[members[k]] = 1;
  }

  std::vector<NodeId> pool;
  for (NodeId i = 0; i < n; ++i) {
    if (!splits.train[i]) pool.push_back(i);
  }
  if (static_cast<int>(pool.size()) < val_count) {
    throw InputError("splits: not enough nodes left for the validation set");
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int k = 0; k < val_count; ++k) splits.val[pool[k]] = 1;
  for (std::size_t k = val_count; k < pool.size(); ++k) splits.test[pool[k]] = 1;

  return {std::move(features), std::move(splits)};
}

}  // namespace curvgraph
