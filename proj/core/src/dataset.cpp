#include "curvgraph/dataset.hpp"

#include <algorithm>
#include <string>

#include "curvgraph/errors.hpp"

namespace curvgraph {

void SplitMasks::validate(std::size_t num_nodes) const {
  if (train.size() != num_nodes || val.size() != num_nodes ||
      test.size() != num_nodes) {
    throw InputError("splits: mask sizes do not match node count");
  }
  // Masks must be pairwise disjoint, with one sanctioned degenerate case: a
  // validation mask identical to the training mask (the one-label-per-class
  // protocol, where no nodes can be spared for a held-out validation set).
  const bool val_is_train = std::equal(train.begin(), train.end(), val.begin(),
                                       [](std::uint8_t a, std::uint8_t b) {
                                         return (a != 0) == (b != 0);
                                       });
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (test[i] && (train[i] || val[i])) {
      throw InputError("splits: node " + std::to_string(i) +
                       " is in the test split and another split");
    }
    if (!val_is_train && train[i] && val[i]) {
      throw InputError("splits: node " + std::to_string(i) +
                       " is in both the train and val splits");
    }
  }
}

std::size_t mask_count(const Mask& m) {
  return static_cast<std::size_t>(
      std::count_if(m.begin(), m.end(), [](std::uint8_t b) { return b != 0; }));
}

std::vector<NodeId> mask_indices(const Mask& m) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

int num_classes(const LabelVector& labels) {
  int max_label = -1;
  for (std::int32_t l : labels) max_label = std::max(max_label, l);
  return max_label + 1;
}

void DatasetBundle::validate() const {
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  if (static_cast<std::size_t>(features.rows()) != n) {
    throw InputError("dataset '" + name + "': feature row count " +
                     std::to_string(features.rows()) +
                     " does not match node count " + std::to_string(n));
  }
  if (labels.size() != n) {
    throw InputError("dataset '" + name + "': label count mismatch");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      throw InputError("dataset '" + name + "': negative label at node " +
                       std::to_string(i));
    }
  }
  if (!features.allFinite()) {
    throw InputError("dataset '" + name + "': non-finite feature entries");
  }
  splits.validate(n);
}

}  // namespace curvgraph
