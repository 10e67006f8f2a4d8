#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "curvgraph/dataset.hpp"
#include "curvgraph/weights.hpp"

namespace curvgraph {

enum class WeightScheme { kCurvature, kGcn, kMlp };

struct ModelConfig {
  int hidden_dim = 8;
  WeightScheme scheme = WeightScheme::kCurvature;
  NctmMode nctm = NctmMode::linear();
  CnmMode cnm = CnmMode::kSymmetric;
  double alpha = 0.5;

  double lr = 0.005;
  double l2 = 5e-4;
  // Apply the L2 penalty to the first layer only (off: both layers).
  bool l2_first_layer_only = false;
  int patience = 100;
  int max_epochs = 1000;
  std::uint64_t seed = 2020;
  double dropout = 0.0;
  bool use_bias = false;

  void validate() const;
};

// Network depth is fixed at two layers.
inline constexpr int kNumLayers = 2;

struct AdamMoments {
  Eigen::MatrixXd m;
  Eigen::MatrixXd v;
};

struct ModelState {
  Eigen::MatrixXd w1;  // F x H
  Eigen::MatrixXd w2;  // H x C
  Eigen::VectorXd b1;  // empty unless biases enabled
  Eigen::VectorXd b2;
  AdamMoments adam_w1, adam_w2, adam_b1, adam_b2;
  long step = 0;
};

// Entries i.i.d. uniform on [-a, a] with a = sqrt(6 / (rows + cols)).
// Deterministic given the generator state.
Eigen::MatrixXd glorot_init(Eigen::Index rows, Eigen::Index cols,
                            std::mt19937_64& rng);

// Sparse aggregation: row i of the result is sum_j tau_ij * M.row(j).
// Neighbor order is fixed by the CSR layout, so results are reproducible.
Eigen::MatrixXd aggregate(const WeightedAdjacency& t, const Eigen::MatrixXd& m);

// Transposed aggregation: result row j accumulates tau_ij * M.row(i).
Eigen::MatrixXd aggregate_transpose(const WeightedAdjacency& t,
                                    const Eigen::MatrixXd& m);

struct DropoutSpec {
  double rate = 0.0;
  std::mt19937_64* rng = nullptr;  // required when rate > 0
};

struct ForwardCache {
  Eigen::MatrixXd x_used;  // input after dropout; empty when no input dropout
  Eigen::MatrixXd z1;      // first-layer pre-activation
  Eigen::MatrixXd h1;      // relu(z1) after hidden dropout
  Eigen::MatrixXd h1_keep; // dropout keep-mask scaling, empty when unused
  Eigen::MatrixXd logits;
};

// Two aggregation layers, relu in between, no output activation (softmax
// lives in the loss). Throws DivergenceError(0) on non-finite activations.
ForwardCache forward(const FeatureMatrix& x, const WeightedAdjacency& t,
                     const ModelState& s, const DropoutSpec& dropout = {});

struct Gradients {
  Eigen::MatrixXd w1, w2;
  Eigen::VectorXd b1, b2;
};

struct LossInfo {
  double total = 0.0;      // data loss + L2 penalty
  double data = 0.0;       // mean masked cross-entropy
};

// Mean softmax cross-entropy over the masked nodes plus (l2/2) * ||W||^2,
// with gradients propagated analytically through both aggregations and the
// relu. The mask must be non-empty.
std::pair<LossInfo, Gradients> loss_and_grads(
    const FeatureMatrix& x, const WeightedAdjacency& t,
    const ForwardCache& cache, const LabelVector& labels, const Mask& mask,
    const ModelState& s, double l2, bool l2_first_layer_only = false);

void adam_update(ModelState& s, const Gradients& g, double lr);

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  ModelState state;  // parameters from the best-validation epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_acc = 0.0;
};

// Full-batch Adam with early stopping on validation accuracy: training halts
// once `patience` epochs pass without improvement (or at max_epochs) and the
// best-validation parameters are restored. Deterministic per seed.
TrainResult train(const DatasetBundle& data, const WeightedAdjacency& t,
                  const ModelConfig& cfg);

double evaluate(const ModelState& s, const FeatureMatrix& x,
                const WeightedAdjacency& t, const LabelVector& labels,
                const Mask& mask);

// Per-seed inputs of one repeat run.
struct RunInput {
  std::shared_ptr<const DatasetBundle> data;
  std::shared_ptr<const WeightedAdjacency> weights;
};

using RunProvider = std::function<RunInput(std::uint64_t seed)>;

struct ExperimentResult {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::vector<double> accuracies;
  std::vector<std::uint64_t> seeds;
};

// Repeats training with seeds seed, seed+1, ... and reports test accuracy
// statistics. Runs are independent and may execute in parallel; the provider
// must therefore be safe to call concurrently.
ExperimentResult run_experiment(const RunProvider& provider,
                                const ModelConfig& cfg, int repeats,
                                int threads = 1);

// Builds the aggregation weights demanded by cfg.scheme.
WeightedAdjacency weights_for_scheme(const Graph& g, const ModelConfig& cfg,
                                     int threads = 1);

}  // namespace curvgraph
