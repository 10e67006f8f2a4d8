#include "curvgraph/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvgraph/errors.hpp"
#include "curvgraph/parallel.hpp"

namespace curvgraph {

void ModelConfig::validate() const {
  if (hidden_dim < 1) throw InputError("model: hidden_dim must be >= 1");
  if (lr < 0.0) throw InputError("model: learning rate must be >= 0");
  if (l2 < 0.0) throw InputError("model: l2 must be >= 0");
  if (patience < 1) throw InputError("model: patience must be >= 1");
  if (max_epochs < 1) throw InputError("model: max_epochs must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw InputError("model: dropout must lie in [0, 1)");
  }
  nctm.validate();
}

Eigen::MatrixXd glorot_init(Eigen::Index rows, Eigen::Index cols,
                            std::mt19937_64& rng) {
  if (rows < 1 || cols < 1) throw InputError("glorot_init: empty shape");
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> uniform(-a, a);
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      w(r, c) = uniform(rng);
    }
  }
  return w;
}

Eigen::MatrixXd aggregate(const WeightedAdjacency& t, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  const NodeId n = t.num_nodes();
  for (NodeId i = 0; i < n; ++i) {
    auto nbrs = t.row_neighbors(i);
    auto tau = t.row_tau(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      out.row(i) += tau[k] * m.row(nbrs[k]);
    }
  }
  return out;
}

Eigen::MatrixXd aggregate_transpose(const WeightedAdjacency& t,
                                    const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  const NodeId n = t.num_nodes();
  for (NodeId i = 0; i < n; ++i) {
    auto nbrs = t.row_neighbors(i);
    auto tau = t.row_tau(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      out.row(nbrs[k]) += tau[k] * m.row(i);
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd dropout_keep_mask(Eigen::Index rows, Eigen::Index cols,
                                  double rate, std::mt19937_64& rng) {
  // Inverted dropout: kept entries are scaled by 1/keep so expectations match
  // the evaluation-time forward pass.
  const double keep = 1.0 - rate;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd mask(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      mask(r, c) = uniform(rng) < keep ? 1.0 / keep : 0.0;
    }
  }
  return mask;
}

}  // namespace

ForwardCache forward(const FeatureMatrix& x, const WeightedAdjacency& t,
                     const ModelState& s, const DropoutSpec& dropout) {
  if (x.rows() != static_cast<Eigen::Index>(t.num_nodes())) {
    throw InputError("forward: feature rows do not match weight rows");
  }
  if (x.cols() != s.w1.rows()) {
    throw InputError("forward: feature dim does not match W1");
  }
  const bool use_dropout = dropout.rate > 0.0;
  if (use_dropout && dropout.rng == nullptr) {
    throw InputError("forward: dropout requires an rng");
  }

  ForwardCache cache;
  const Eigen::MatrixXd* input = &x;
  if (use_dropout) {
    cache.x_used = x.cwiseProduct(
        dropout_keep_mask(x.rows(), x.cols(), dropout.rate, *dropout.rng));
    input = &cache.x_used;
  }

  cache.z1 = aggregate(t, *input * s.w1);
  if (s.b1.size() > 0) cache.z1.rowwise() += s.b1.transpose();
  cache.h1 = cache.z1.cwiseMax(0.0);
  if (use_dropout) {
    cache.h1_keep = dropout_keep_mask(cache.h1.rows(), cache.h1.cols(),
                                      dropout.rate, *dropout.rng);
    cache.h1 = cache.h1.cwiseProduct(cache.h1_keep);
  }
  cache.logits = aggregate(t, cache.h1 * s.w2);
  if (s.b2.size() > 0) cache.logits.rowwise() += s.b2.transpose();

  if (!cache.logits.allFinite()) {
    throw DivergenceError(0, "forward: non-finite activations");
  }
  return cache;
}

std::pair<LossInfo, Gradients> loss_and_grads(
    const FeatureMatrix& x, const WeightedAdjacency& t,
    const ForwardCache& cache, const LabelVector& labels, const Mask& mask,
    const ModelState& s, double l2, bool l2_first_layer_only) {
  const auto masked = mask_indices(mask);
  if (masked.empty()) throw InputError("loss: empty mask");

  const Eigen::Index classes = cache.logits.cols();
  const double inv_count = 1.0 / static_cast<double>(masked.size());

  LossInfo loss;
  Eigen::MatrixXd dlogits =
      Eigen::MatrixXd::Zero(cache.logits.rows(), classes);
  Eigen::VectorXd probs(classes);
  for (NodeId i : masked) {
    const auto row = cache.logits.row(i);
    const double peak = row.maxCoeff();
    probs = (row.transpose().array() - peak).exp();
    const double z = probs.sum();
    probs /= z;
    const std::int32_t label = labels[i];
    if (label < 0 || label >= classes) {
      throw InputError("loss: label out of range at node " + std::to_string(i));
    }
    loss.data -= std::log(probs[label]) * inv_count;
    dlogits.row(i) = probs.transpose() * inv_count;
    dlogits(i, label) -= inv_count;
  }

  loss.total = loss.data + 0.5 * l2 * s.w1.squaredNorm();
  if (!l2_first_layer_only) loss.total += 0.5 * l2 * s.w2.squaredNorm();

  Gradients g;
  const Eigen::MatrixXd& x_used = cache.x_used.size() > 0 ? cache.x_used : x;

  Eigen::MatrixXd g2 = aggregate_transpose(t, dlogits);
  g.w2 = cache.h1.transpose() * g2;
  if (!l2_first_layer_only) g.w2 += l2 * s.w2;
  if (s.b2.size() > 0) g.b2 = dlogits.colwise().sum();

  Eigen::MatrixXd dh1 = g2 * s.w2.transpose();
  if (cache.h1_keep.size() > 0) dh1 = dh1.cwiseProduct(cache.h1_keep);
  Eigen::MatrixXd dz1 =
      dh1.cwiseProduct((cache.z1.array() > 0.0).cast<double>().matrix());
  Eigen::MatrixXd g1 = aggregate_transpose(t, dz1);
  g.w1 = x_used.transpose() * g1 + l2 * s.w1;
  if (s.b1.size() > 0) g.b1 = dz1.colwise().sum();

  return {loss, g};
}

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

void adam_step(Eigen::MatrixXd& param, AdamMoments& moments,
               const Eigen::MatrixXd& grad, double lr, long step) {
  if (moments.m.size() == 0) {
    moments.m = Eigen::MatrixXd::Zero(param.rows(), param.cols());
    moments.v = Eigen::MatrixXd::Zero(param.rows(), param.cols());
  }
  moments.m = kAdamBeta1 * moments.m + (1.0 - kAdamBeta1) * grad;
  moments.v = kAdamBeta2 * moments.v + (1.0 - kAdamBeta2) * grad.cwiseProduct(grad);
  const double correct1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
  const double correct2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
  param.array() -= lr * (moments.m.array() / correct1) /
                   ((moments.v.array() / correct2).sqrt() + kAdamEps);
}

}  // namespace

void adam_update(ModelState& s, const Gradients& g, double lr) {
  ++s.step;
  adam_step(s.w1, s.adam_w1, g.w1, lr, s.step);
  adam_step(s.w2, s.adam_w2, g.w2, lr, s.step);
  if (s.b1.size() > 0) {
    Eigen::MatrixXd b = s.b1, gb = g.b1;
    adam_step(b, s.adam_b1, gb, lr, s.step);
    s.b1 = b;
  }
  if (s.b2.size() > 0) {
    Eigen::MatrixXd b = s.b2, gb = g.b2;
    adam_step(b, s.adam_b2, gb, lr, s.step);
    s.b2 = b;
  }
}

namespace {

double accuracy_from_logits(const Eigen::MatrixXd& logits,
                            const LabelVector& labels,
                            const std::vector<NodeId>& masked) {
  std::size_t correct = 0;
  for (NodeId i : masked) {
    const auto row = logits.row(i);
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < row.size(); ++c) {
      if (row(c) > row(best)) best = c;  // ties resolve to the lowest class id
    }
    if (static_cast<std::int32_t>(best) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(masked.size());
}

double cross_entropy_from_logits(const Eigen::MatrixXd& logits,
                                 const LabelVector& labels,
                                 const std::vector<NodeId>& masked) {
  double loss = 0.0;
  for (NodeId i : masked) {
    const auto row = logits.row(i);
    const double peak = row.maxCoeff();
    const double z = (row.array() - peak).exp().sum();
    loss += std::log(z) - (logits(i, labels[i]) - peak);
  }
  return loss / static_cast<double>(masked.size());
}

}  // namespace

double evaluate(const ModelState& s, const FeatureMatrix& x,
                const WeightedAdjacency& t, const LabelVector& labels,
                const Mask& mask) {
  const auto masked = mask_indices(mask);
  if (masked.empty()) throw InputError("evaluate: empty mask");
  const ForwardCache cache = forward(x, t, s);
  return accuracy_from_logits(cache.logits, labels, masked);
}

TrainResult train(const DatasetBundle& data, const WeightedAdjacency& t,
                  const ModelConfig& cfg) {
  cfg.validate();
  data.validate();
  const int classes = num_classes(data.labels);
  if (classes < 2) throw InputError("train: need at least two classes");

  std::mt19937_64 rng(cfg.seed);
  ModelState s;
  s.w1 = glorot_init(data.features.cols(), cfg.hidden_dim, rng);
  s.w2 = glorot_init(cfg.hidden_dim, classes, rng);
  if (cfg.use_bias) {
    s.b1 = Eigen::VectorXd::Zero(cfg.hidden_dim);
    s.b2 = Eigen::VectorXd::Zero(classes);
  }

  const auto val_nodes = mask_indices(data.splits.val);
  if (val_nodes.empty()) throw InputError("train: empty validation mask");

  TrainResult result;
  result.best_val_acc = -1.0;
  double best_val_loss = std::numeric_limits<double>::infinity();
  ModelState best_state = s;
  int wait = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    DropoutSpec dropout{cfg.dropout, &rng};
    ForwardCache cache;
    LossInfo loss;
    Eigen::MatrixXd clean_logits;
    try {
      cache = forward(data.features, t, s, dropout);
      Gradients grads;
      std::tie(loss, grads) =
          loss_and_grads(data.features, t, cache, data.labels,
                         data.splits.train, s, cfg.l2, cfg.l2_first_layer_only);
      if (!std::isfinite(loss.total)) {
        throw DivergenceError(epoch, "train: non-finite loss");
      }
      adam_update(s, grads, cfg.lr);
      clean_logits = forward(data.features, t, s).logits;
    } catch (const DivergenceError& e) {
      throw DivergenceError(epoch, "train: diverged at epoch " +
                                       std::to_string(epoch) + ": " + e.what());
    }

    const double val_acc =
        accuracy_from_logits(clean_logits, data.labels, val_nodes);
    const double val_loss =
        cross_entropy_from_logits(clean_logits, data.labels, val_nodes);
    result.history.push_back({epoch, loss.total, val_acc});

    // Patience counts epochs without an accuracy improvement; among epochs of
    // equal best accuracy the restored parameters come from the one with the
    // lowest validation loss (tiny validation sets saturate accuracy early).
    const bool acc_improved = val_acc > result.best_val_acc;
    if (acc_improved ||
        (val_acc == result.best_val_acc && val_loss < best_val_loss)) {
      result.best_val_acc = val_acc;
      result.best_epoch = epoch;
      best_val_loss = val_loss;
      best_state = s;
    }
    if (acc_improved) {
      wait = 0;
    } else if (++wait >= cfg.patience) {
      break;
    }
  }

  result.state = std::move(best_state);
  return result;
}

ExperimentResult run_experiment(const RunProvider& provider,
                                const ModelConfig& cfg, int repeats,
                                int threads) {
  if (repeats < 1) throw InputError("run_experiment: repeats must be >= 1");
  ExperimentResult result;
  result.accuracies.resize(repeats);
  result.seeds.resize(repeats);
  for (int r = 0; r < repeats; ++r) result.seeds[r] = cfg.seed + r;

  parallel_for(static_cast<std::size_t>(repeats), resolve_threads(threads),
               [&](std::size_t r) {
                 ModelConfig run_cfg = cfg;
                 run_cfg.seed = result.seeds[r];
                 RunInput input = provider(run_cfg.seed);
                 TrainResult trained =
                     train(*input.data, *input.weights, run_cfg);
                 result.accuracies[r] =
                     evaluate(trained.state, input.data->features,
                              *input.weights, input.data->labels,
                              input.data->splits.test);
               });

  double sum = 0.0;
  for (double a : result.accuracies) sum += a;
  result.mean = sum / static_cast<double>(repeats);
  double var = 0.0;
  for (double a : result.accuracies) {
    var += (a - result.mean) * (a - result.mean);
  }
  result.stddev = std::sqrt(var / static_cast<double>(repeats));
  return result;
}

WeightedAdjacency weights_for_scheme(const Graph& g, const ModelConfig& cfg,
                                     int threads) {
  switch (cfg.scheme) {
    case WeightScheme::kCurvature:
      return build_weights(g, CurvatureConfig{cfg.alpha}, cfg.nctm, cfg.cnm,
                           threads);
    case WeightScheme::kGcn:
      return gcn_weights(g);
    case WeightScheme::kMlp:
      return identity_weights(g.num_nodes());
  }
  throw InputError("weights_for_scheme: unknown scheme");
}

}  // namespace curvgraph
