#include <cmath>
#include <numeric>
#include <random>

#include "curvgraph/errors.hpp"
#include "curvgraph/nn.hpp"
#include "curvgraph/synth.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace curvgraph;
using namespace curvgraph::testutil;

namespace {

DatasetBundle random_bundle(NodeId n, int feature_dim, int classes,
                            double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DatasetBundle bundle;
  bundle.name = "random";
  bundle.graph = random_graph(n, density, rng);
  bundle.features = FeatureMatrix(n, feature_dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (NodeId i = 0; i < n; ++i) {
    for (int f = 0; f < feature_dim; ++f) bundle.features(i, f) = normal(rng);
  }
  std::uniform_int_distribution<int> label(0, classes - 1);
  bundle.labels.resize(n);
  for (NodeId i = 0; i < n; ++i) bundle.labels[i] = label(rng);
  // Ensure every class occurs.
  for (int c = 0; c < classes; ++c) bundle.labels[c % n] = c;
  bundle.splits.train.assign(n, 0);
  bundle.splits.val.assign(n, 0);
  bundle.splits.test.assign(n, 0);
  for (NodeId i = 0; i < n; ++i) {
    bundle.splits.train[i] = i % 3 == 0;
    bundle.splits.val[i] = i % 3 == 1;
    bundle.splits.test[i] = i % 3 == 2;
  }
  return bundle;
}

double loss_at(const FeatureMatrix& x, const WeightedAdjacency& t,
               const LabelVector& labels, const Mask& mask,
               const ModelState& s, double l2) {
  ForwardCache cache = forward(x, t, s);
  auto [loss, grads] = loss_and_grads(x, t, cache, labels, mask, s, l2);
  return loss.total;
}

// Central finite differences over every parameter entry.
double max_gradient_error(const DatasetBundle& data,
                          const WeightedAdjacency& t, ModelState s, double l2) {
  ForwardCache cache = forward(data.features, t, s);
  auto [loss, grads] = loss_and_grads(data.features, t, cache, data.labels,
                                      data.splits.train, s, l2);
  const double step = 1e-5;
  double worst = 0.0;
  auto probe = [&](Eigen::MatrixXd& param, const Eigen::MatrixXd& grad) {
    for (Eigen::Index r = 0; r < param.rows(); ++r) {
      for (Eigen::Index c = 0; c < param.cols(); ++c) {
        const double keep = param(r, c);
        param(r, c) = keep + step;
        double up = loss_at(data.features, t, data.labels, data.splits.train,
                            s, l2);
        param(r, c) = keep - step;
        double down = loss_at(data.features, t, data.labels, data.splits.train,
                              s, l2);
        param(r, c) = keep;
        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max({1.0, std::abs(numeric),
                                       std::abs(grad(r, c))});
        worst = std::max(worst, std::abs(numeric - grad(r, c)) / denom);
      }
    }
  };
  probe(s.w1, grads.w1);
  probe(s.w2, grads.w2);
  if (s.b1.size() > 0) {
    Eigen::MatrixXd b1 = s.b1, g1 = grads.b1;
    for (Eigen::Index r = 0; r < b1.rows(); ++r) {
      const double keep = s.b1(r);
      s.b1(r) = keep + step;
      double up = loss_at(data.features, t, data.labels, data.splits.train, s, l2);
      s.b1(r) = keep - step;
      double down = loss_at(data.features, t, data.labels, data.splits.train, s, l2);
      s.b1(r) = keep;
      const double numeric = (up - down) / (2.0 * step);
      worst = std::max(worst, std::abs(numeric - g1(r, 0)) /
                                  std::max(1.0, std::abs(numeric)));
    }
  }
  return worst;
}

ModelState fresh_state(const DatasetBundle& data, const ModelConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  ModelState s;
  s.w1 = glorot_init(data.features.cols(), cfg.hidden_dim, rng);
  s.w2 = glorot_init(cfg.hidden_dim, num_classes(data.labels), rng);
  if (cfg.use_bias) {
    s.b1 = Eigen::VectorXd::Zero(cfg.hidden_dim);
    s.b2 = Eigen::VectorXd::Zero(num_classes(data.labels));
  }
  return s;
}

}  // namespace

TEST_CASE("glorot bounds, determinism and variance") {
  std::mt19937_64 rng(1);
  Eigen::MatrixXd w = glorot_init(2, 4, rng);  // a = 1
  CHECK(w.maxCoeff() <= 1.0);
  CHECK(w.minCoeff() >= -1.0);

  std::mt19937_64 rng_a(99), rng_b(99);
  CHECK(glorot_init(6, 5, rng_a) == glorot_init(6, 5, rng_b));

  std::mt19937_64 rng_c(7);
  Eigen::MatrixXd big = glorot_init(1000, 1000, rng_c);
  const double a = std::sqrt(6.0 / 2000.0);
  const double expected_var = a * a / 3.0;
  const double var = (big.array() - big.mean()).square().mean();
  CHECK(var == doctest::Approx(expected_var).epsilon(0.10));
}

TEST_CASE("identity network reproduces nonnegative inputs") {
  WeightedAdjacency t = identity_weights(1);
  ModelState s;
  s.w1 = Eigen::MatrixXd::Identity(3, 3);
  s.w2 = Eigen::MatrixXd::Identity(3, 3);
  FeatureMatrix x(1, 3);
  x << 0.3, 1.2, 0.0;
  ForwardCache cache = forward(x, t, s);
  CHECK(cache.logits == x);
}

TEST_CASE("identity weights reduce the network to a plain mlp") {
  DatasetBundle data = random_bundle(9, 4, 3, 0.4, 5);
  ModelConfig cfg;
  cfg.hidden_dim = 5;
  ModelState s = fresh_state(data, cfg);
  WeightedAdjacency t = identity_weights(data.graph.num_nodes());
  ForwardCache cache = forward(data.features, t, s);
  Eigen::MatrixXd expected =
      (data.features * s.w1).cwiseMax(0.0) * s.w2;
  CHECK((cache.logits - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a node with only a self-loop row sees only its own features") {
  DatasetBundle data = random_bundle(6, 3, 2, 0.5, 11);
  ModelConfig cfg;
  cfg.hidden_dim = 4;
  ModelState s = fresh_state(data, cfg);

  WeightedAdjacency t = identity_weights(data.graph.num_nodes());
  ForwardCache before = forward(data.features, t, s);
  FeatureMatrix perturbed = data.features;
  for (NodeId i = 1; i < 6; ++i) perturbed.row(i).array() += 2.0;
  ForwardCache after = forward(perturbed, t, s);
  CHECK(before.logits.row(0) == after.logits.row(0));
}

TEST_CASE("uniform logits have loss ln C") {
  DatasetBundle data = random_bundle(9, 4, 3, 0.4, 5);
  ModelConfig cfg;
  cfg.hidden_dim = 5;
  ModelState s = fresh_state(data, cfg);
  s.w1.setZero();
  s.w2.setZero();
  WeightedAdjacency t = gcn_weights(data.graph);
  ForwardCache cache = forward(data.features, t, s);
  auto [loss, grads] = loss_and_grads(data.features, t, cache, data.labels,
                                      data.splits.train, s, 0.0);
  CHECK(loss.data == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("sharper one-hot logits drive the loss towards zero") {
  // Monotone decrease of the data loss as correct logits scale up.
  const Eigen::Index n = 4, classes = 3;
  LabelVector labels = {0, 1, 2, 1};
  Mask mask(n, 1);
  WeightedAdjacency t = identity_weights(n);
  ModelState s;
  s.w1 = Eigen::MatrixXd::Identity(classes, classes);
  s.w2 = Eigen::MatrixXd::Identity(classes, classes);
  double previous = std::numeric_limits<double>::infinity();
  for (double scale : {1.0, 10.0, 100.0}) {
    FeatureMatrix x = FeatureMatrix::Zero(n, classes);
    for (Eigen::Index i = 0; i < n; ++i) x(i, labels[i]) = scale;
    ForwardCache cache = forward(x, t, s);
    auto [loss, grads] =
        loss_and_grads(x, t, cache, labels, mask, s, 0.0);
    CHECK(loss.data < previous);
    previous = loss.data;
  }
  CHECK(previous < 1e-10);
}

TEST_CASE("analytic gradients match central differences") {
  for (std::uint64_t seed : {101ull, 202ull, 303ull}) {
    DatasetBundle data = random_bundle(12, 5, 3, 0.3, seed);
    ModelConfig cfg;
    cfg.hidden_dim = 4;
    cfg.seed = seed;
    ModelState s = fresh_state(data, cfg);
    WeightedAdjacency t =
        build_weights(data.graph, CurvatureConfig{}, NctmMode::linear(1.0),
                      CnmMode::kSymmetric);
    CHECK(max_gradient_error(data, t, s, 5e-4) <= 1e-5);
  }
}

TEST_CASE("gradients also check out with biases enabled") {
  DatasetBundle data = random_bundle(12, 5, 3, 0.3, 404);
  ModelConfig cfg;
  cfg.hidden_dim = 4;
  cfg.use_bias = true;
  ModelState s = fresh_state(data, cfg);
  std::mt19937_64 rng(13);
  s.b1 = glorot_init(cfg.hidden_dim, 1, rng).col(0);
  s.b2 = glorot_init(num_classes(data.labels), 1, rng).col(0);
  WeightedAdjacency t = gcn_weights(data.graph);
  CHECK(max_gradient_error(data, t, s, 5e-4) <= 1e-5);
}

TEST_CASE("adam with zero gradients leaves fresh parameters in place") {
  DatasetBundle data = random_bundle(6, 3, 2, 0.5, 21);
  ModelConfig cfg;
  cfg.hidden_dim = 3;
  ModelState s = fresh_state(data, cfg);
  ModelState before = s;
  Gradients zero;
  zero.w1 = Eigen::MatrixXd::Zero(s.w1.rows(), s.w1.cols());
  zero.w2 = Eigen::MatrixXd::Zero(s.w2.rows(), s.w2.cols());
  adam_update(s, zero, 0.01);
  CHECK(s.w1 == before.w1);
  CHECK(s.w2 == before.w2);
}

TEST_CASE("doubling l2 doubles the penalty part of the loss") {
  DatasetBundle data = random_bundle(10, 4, 3, 0.3, 33);
  ModelConfig cfg;
  cfg.hidden_dim = 4;
  ModelState s = fresh_state(data, cfg);
  WeightedAdjacency t = gcn_weights(data.graph);
  ForwardCache cache = forward(data.features, t, s);
  auto [single, g1] = loss_and_grads(data.features, t, cache, data.labels,
                                     data.splits.train, s, 1e-3);
  auto [twice, g2] = loss_and_grads(data.features, t, cache, data.labels,
                                    data.splits.train, s, 2e-3);
  CHECK(twice.total - twice.data ==
        doctest::Approx(2.0 * (single.total - single.data)).epsilon(1e-12));
}

TEST_CASE("two separable cliques train to perfect accuracy") {
  // Two disconnected 5-cliques, one class each.
  EdgeVec edges;
  for (NodeId i = 0; i < 5; ++i) {
    for (NodeId j = i + 1; j < 5; ++j) {
      edges.emplace_back(i, j);
      edges.emplace_back(i + 5, j + 5);
    }
  }
  DatasetBundle data;
  data.name = "cliques";
  data.graph = Graph::from_edges(10, edges);
  std::mt19937_64 rng(2020);
  std::normal_distribution<double> normal(0.0, 1.0);
  data.features = FeatureMatrix(10, 4);
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (Eigen::Index f = 0; f < 4; ++f) data.features(i, f) = normal(rng);
  }
  data.labels.assign(10, 0);
  for (NodeId i = 5; i < 10; ++i) data.labels[i] = 1;
  data.splits.train.assign(10, 0);
  data.splits.val.assign(10, 0);
  data.splits.test.assign(10, 0);
  data.splits.train[0] = data.splits.train[5] = 1;
  data.splits.val[1] = data.splits.val[6] = 1;
  for (NodeId i : {2, 3, 4, 7, 8, 9}) data.splits.test[i] = 1;

  ModelConfig cfg;
  cfg.hidden_dim = 8;
  cfg.max_epochs = 200;
  WeightedAdjacency t =
      build_weights(data.graph, CurvatureConfig{}, NctmMode::linear(1.0),
                    CnmMode::kSymmetric);
  TrainResult result = train(data, t, cfg);
  CHECK(evaluate(result.state, data.features, t, data.labels,
                 data.splits.test) == 1.0);
}

TEST_CASE("zero learning rate freezes the parameters") {
  DatasetBundle data = random_bundle(9, 4, 3, 0.4, 55);
  ModelConfig cfg;
  cfg.hidden_dim = 4;
  cfg.lr = 0.0;
  cfg.max_epochs = 10;
  WeightedAdjacency t = gcn_weights(data.graph);
  ModelState initial = fresh_state(data, cfg);
  TrainResult result = train(data, t, cfg);
  CHECK(result.state.w1 == initial.w1);
  CHECK(result.state.w2 == initial.w2);
  for (const EpochRecord& r : result.history) {
    CHECK(r.loss == result.history.front().loss);
    CHECK(r.val_acc == result.history.front().val_acc);
  }
}

TEST_CASE("training is bitwise deterministic per seed") {
  DatasetBundle data = random_bundle(15, 5, 3, 0.3, 66);
  ModelConfig cfg;
  cfg.hidden_dim = 6;
  cfg.max_epochs = 50;
  WeightedAdjacency t = gcn_weights(data.graph);
  TrainResult a = train(data, t, cfg);
  TrainResult b = train(data, t, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    CHECK(a.history[k].loss == b.history[k].loss);
    CHECK(a.history[k].val_acc == b.history[k].val_acc);
  }
  CHECK(a.state.w1 == b.state.w1);
  CHECK(a.state.w2 == b.state.w2);
}

TEST_CASE("relabeling nodes permutes the logits") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 50; ++round) {
    DatasetBundle data = random_bundle(12, 4, 3, 0.35, 1000 + round);
    ModelConfig cfg;
    cfg.hidden_dim = 5;
    ModelState s = fresh_state(data, cfg);
    WeightedAdjacency t = gcn_weights(data.graph);
    ForwardCache base = forward(data.features, t, s);

    std::vector<NodeId> perm(data.graph.num_nodes());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    EdgeVec permuted_edges;
    for (const auto& [u, v] : data.graph.edge_list()) {
      permuted_edges.emplace_back(perm[u], perm[v]);
    }
    Graph pg = Graph::from_edges(data.graph.num_nodes(), permuted_edges);
    FeatureMatrix px(data.features.rows(), data.features.cols());
    for (NodeId i = 0; i < data.graph.num_nodes(); ++i) {
      px.row(perm[i]) = data.features.row(i);
    }
    ForwardCache moved = forward(px, gcn_weights(pg), s);
    for (NodeId i = 0; i < data.graph.num_nodes(); ++i) {
      CHECK((moved.logits.row(perm[i]) - base.logits.row(i))
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("the mlp scheme ignores the edge set") {
  DatasetBundle sparse = random_bundle(10, 4, 3, 0.1, 88);
  DatasetBundle dense = sparse;
  std::mt19937_64 rng(89);
  dense.graph = random_graph(10, 0.9, rng);
  ModelConfig cfg;
  cfg.hidden_dim = 4;
  cfg.scheme = WeightScheme::kMlp;
  ModelState s = fresh_state(sparse, cfg);
  ForwardCache a = forward(sparse.features, weights_for_scheme(sparse.graph, cfg), s);
  ForwardCache b = forward(dense.features, weights_for_scheme(dense.graph, cfg), s);
  CHECK(a.logits == b.logits);
}

TEST_CASE("evaluate counts argmax hits with low-id tie breaking") {
  WeightedAdjacency t = identity_weights(3);
  ModelState s;
  s.w1 = Eigen::MatrixXd::Identity(2, 2);
  s.w2 = Eigen::MatrixXd::Identity(2, 2);
  FeatureMatrix x(3, 2);
  x << 1.0, 0.0,   // predicts class 0
       0.0, 1.0,   // predicts class 1
       0.5, 0.5;   // tie resolves to class 0
  Mask all(3, 1);
  CHECK(evaluate(s, x, t, LabelVector{0, 1, 0}, all) == 1.0);
  // Adversarial binary flip complements the accuracy.
  CHECK(evaluate(s, x, t, LabelVector{1, 0, 1}, all) == 0.0);
}

TEST_CASE("untrained models sit at chance level") {
  DatasetBundle data = random_bundle(200, 8, 5, 0.05, 91);
  // Balanced labels.
  for (NodeId i = 0; i < 200; ++i) data.labels[i] = i % 5;
  Mask all(200, 1);
  WeightedAdjacency t = gcn_weights(data.graph);
  std::vector<double> accs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ModelConfig cfg;
    cfg.hidden_dim = 6;
    cfg.seed = seed;
    ModelState s = fresh_state(data, cfg);
    accs.push_back(evaluate(s, data.features, t, data.labels, all));
  }
  double mean = std::accumulate(accs.begin(), accs.end(), 0.0) / accs.size();
  CHECK(mean == doctest::Approx(0.2).epsilon(0.5));
  CHECK(std::abs(mean - 0.2) <= 0.1);
}

TEST_CASE("run_experiment statistics") {
  DatasetBundle data = random_bundle(15, 4, 3, 0.3, 97);
  auto shared = std::make_shared<const DatasetBundle>(data);
  auto weights = std::make_shared<const WeightedAdjacency>(gcn_weights(data.graph));
  RunProvider provider = [&](std::uint64_t) {
    return RunInput{shared, weights};
  };
  ModelConfig cfg;
  cfg.hidden_dim = 4;
  cfg.max_epochs = 30;

  ExperimentResult single = run_experiment(provider, cfg, 1);
  CHECK(single.stddev == 0.0);
  CHECK(single.accuracies.size() == 1);

  ExperimentResult serial = run_experiment(provider, cfg, 4, 1);
  ExperimentResult threaded = run_experiment(provider, cfg, 4, 4);
  CHECK(serial.accuracies == threaded.accuracies);
  CHECK(serial.seeds == std::vector<std::uint64_t>{2020, 2021, 2022, 2023});
}
