#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "curvgraph/curvature.hpp"
#include "curvgraph/errors.hpp"
#include "curvgraph/synth.hpp"
#include "curvgraph/weights.hpp"
#include "doctest.h"

using namespace curvgraph;

namespace {

bool connected(const Graph& g) {
  if (g.num_nodes() == 0) return true;
  std::vector<char> seen(g.num_nodes(), 0);
  std::deque<NodeId> queue{0};
  seen[0] = 1;
  std::size_t visited = 1;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        queue.push_back(v);
      }
    }
  }
  return visited == g.num_nodes();
}

}  // namespace

TEST_CASE("degenerate block model splits into cliques") {
  SbmSpec spec{50, 5, 1.0, 0.0, 1};
  auto [g, labels] = gen_sbm(spec);
  g.validate();
  CHECK(g.num_edges() == 5 * 45);  // five 10-cliques
  for (const auto& [i, j] : g.edge_list()) CHECK(labels[i] == labels[j]);
  for (NodeId i = 0; i < 50; ++i) CHECK(labels[i] == static_cast<int>(i / 10));
}

TEST_CASE("equal probabilities collapse to the random graph model") {
  SbmSpec spec{100, 5, 0.08, 0.08, 77};
  auto [sbm, labels] = gen_sbm(spec);
  Graph er = gen_er(100, 0.08, 77);
  CHECK(sbm.offsets() == er.offsets());
  CHECK(sbm.columns() == er.columns());
}

TEST_CASE("intra-block edge counts follow the binomial expectation") {
  // Mean over 20 seeds of intra-block edges per block; expectation
  // C(200,2) * 0.15 with 3 sigma tolerance on the mean of 100 block samples.
  const double per_block = 19900.0 * 0.15;
  const double sigma_block = std::sqrt(19900.0 * 0.15 * 0.85);
  double total = 0.0;
  int blocks_counted = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SbmSpec spec{1000, 5, 0.15, 0.025, seed};
    auto [g, labels] = gen_sbm(spec);
    std::vector<int> intra(5, 0);
    for (const auto& [i, j] : g.edge_list()) {
      if (labels[i] == labels[j]) ++intra[labels[i]];
    }
    for (int c = 0; c < 5; ++c) {
      total += intra[c];
      ++blocks_counted;
    }
  }
  const double mean = total / blocks_counted;
  const double tolerance = 3.0 * sigma_block / std::sqrt(blocks_counted);
  CHECK(std::abs(mean - per_block) <= tolerance);
}

TEST_CASE("random graph corner probabilities") {
  Graph empty = gen_er(40, 0.0, 3);
  CHECK(empty.num_edges() == 0);
  Graph full = gen_er(40, 1.0, 3);
  CHECK(full.num_edges() == 40 * 39 / 2);
}

TEST_CASE("random graph mean degree tracks n p") {
  // n=1000, p=0.01: expected degree 9.99; 3 sigma on the mean over 20 seeds.
  double total_degree = 0.0;
  const int seeds = 20;
  for (std::uint64_t seed = 100; seed < 100 + seeds; ++seed) {
    Graph g = gen_er(1000, 0.01, seed);
    total_degree += 2.0 * static_cast<double>(g.num_edges()) / 1000.0;
  }
  const double mean_degree = total_degree / seeds;
  const double expected = 999.0 * 0.01;
  // Var of a single node's degree is ~ n p (1-p); the mean over 1000 nodes
  // and 20 seeds concentrates much harder, so this dominates comfortably.
  const double sigma = std::sqrt(999.0 * 0.01 * 0.99 / (1000.0 * seeds)) * 2.0;
  CHECK(std::abs(mean_degree - expected) <= 3.0 * std::max(sigma, 0.01));
}

TEST_CASE("preferential attachment edge count is exact") {
  for (NodeId m : {1u, 2u, 5u}) {
    Graph g = gen_ba(200, m, 9);
    g.validate();
    CHECK(g.num_edges() ==
          static_cast<std::size_t>(m) * (200 - m) + m * (m - 1) / 2);
    CHECK(connected(g));
  }
}

TEST_CASE("preferential attachment grows heavy tails") {
  int heavy = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph g = gen_ba(1000, 2, seed);
    NodeId max_degree = 0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      max_degree = std::max(max_degree, g.degree(i));
    }
    double mean_degree = 2.0 * g.num_edges() / 1000.0;
    if (max_degree > 5.0 * mean_degree) ++heavy;
  }
  CHECK(heavy == 20);
}

TEST_CASE("generators are deterministic per seed") {
  SbmSpec spec{100, 5, 0.2, 0.02, 42};
  auto [a, la] = gen_sbm(spec);
  auto [b, lb] = gen_sbm(spec);
  CHECK(a.columns() == b.columns());
  spec.seed = 43;
  auto [c, lc] = gen_sbm(spec);
  CHECK(a.columns() != c.columns());

  CHECK(gen_ba(100, 3, 7).columns() == gen_ba(100, 3, 7).columns());
  CHECK(gen_ba(100, 3, 7).columns() != gen_ba(100, 3, 8).columns());
}

TEST_CASE("split protocol produces the 100/300/600 partition") {
  LabelVector labels = block_labels(1000, 5);
  auto [features, splits] = gen_features_and_splits(labels, 20, 2020);
  CHECK(features.rows() == 1000);
  CHECK(features.cols() == 20);
  CHECK(mask_count(splits.train) == 100);
  CHECK(mask_count(splits.val) == 300);
  CHECK(mask_count(splits.test) == 600);
  splits.validate(1000);

  std::vector<int> per_class(5, 0);
  for (NodeId i = 0; i < 1000; ++i) {
    if (splits.train[i]) ++per_class[labels[i]];
  }
  for (int c = 0; c < 5; ++c) CHECK(per_class[c] == 20);

  auto [features2, splits2] = gen_features_and_splits(labels, 20, 2020);
  CHECK(splits.train == splits2.train);
  CHECK(splits.val == splits2.val);
  CHECK(features == features2);
}

TEST_CASE("undersized classes are rejected") {
  LabelVector labels(30, 0);
  labels[29] = 1;  // class 1 has a single member
  CHECK_THROWS_AS(gen_features_and_splits(labels, 4, 1, 20, 5), InputError);
}

TEST_CASE("probability bounds are enforced") {
  CHECK_THROWS_AS(gen_er(10, 1.5, 0), InputError);
  SbmSpec bad{10, 5, -0.1, 0.0, 0};
  CHECK_THROWS_AS(gen_sbm(bad), InputError);
  CHECK_THROWS_AS(gen_ba(5, 5, 0), InputError);
}

TEST_CASE("isolated blocks keep weights inside communities") {
  SbmSpec spec{100, 5, 0.5, 0.0, 11};
  auto [g, labels] = gen_sbm(spec);
  CurvatureMap map = graph_curvature(g, CurvatureConfig{}, 2);
  std::size_t nonnegative = 0;
  for (const auto& [key, value] : map) {
    CHECK(labels[key.first] == labels[key.second]);
    if (value >= 0.0) ++nonnegative;
  }
  CHECK(nonnegative > 0);

  WeightedAdjacency w = build_weights(g, CurvatureConfig{},
                                      NctmMode::linear(1.0), CnmMode::kFirstHop);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    for (NodeId j : w.row_neighbors(i)) CHECK(labels[i] == labels[j]);
  }
}
