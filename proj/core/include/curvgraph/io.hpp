#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvgraph/dataset.hpp"
#include "curvgraph/graph.hpp"
#include "curvgraph/nn.hpp"
#include "curvgraph/weights.hpp"

namespace curvgraph {

// Edge list text format: whitespace-separated "u v" per line, '#' starts a
// comment. A "# nodes=N" comment pins the node count (written by
// write_edgelist so isolated nodes survive a round trip). Non-dense ids are
// remapped to 0..N-1 with the original ids kept in id_map.
struct EdgeListFile {
  Graph graph;
  bool remapped = false;
  std::vector<long long> id_map;  // index -> original id; empty when dense
};

EdgeListFile read_edgelist(const std::filesystem::path& path);
void write_edgelist(const std::filesystem::path& path, const Graph& g);

// GML subset:
//   graph [ node [ id N label "S" value V ] ... edge [ source A target B ] ... ]
// Tolerates arbitrary whitespace and unknown keys (scalar or bracketed)
// anywhere; requires id on nodes and source/target on edges. Parse errors
// carry the byte offset.
struct GmlGraph {
  Graph graph;
  std::vector<std::string> labels;
  std::vector<long long> values;
};

GmlGraph read_gml_subset(const std::filesystem::path& path);
GmlGraph parse_gml_subset(const std::string& text);  // same, from memory

// The one-label-per-class split protocol for community graphs read from GML:
// features are the raw adjacency rows, training picks one seeded node per
// class, validation reuses the training nodes (so early stopping degenerates
// to max-epoch training), and everything else is test.
DatasetBundle football_bundle(const std::filesystem::path& path,
                              std::uint64_t seed);

// CSV features: one row per node, optional header line. Throws ParseError
// with the offending row number on ragged rows.
FeatureMatrix read_features(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const FeatureMatrix& x);

// One integer class id per line.
LabelVector read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const LabelVector& labels);

// One of train/val/test/none per line.
SplitMasks read_splits(const std::filesystem::path& path);
void write_splits(const std::filesystem::path& path, const SplitMasks& splits);

// Bundle persistence under <prefix>.edges / .features.csv / .labels / .splits.
void save_bundle(const std::string& prefix, const DatasetBundle& bundle);
DatasetBundle load_bundle(const std::string& prefix, const std::string& name);

// Aggregated accuracy results of one experiment.
struct ModelMetrics {
  std::string name;
  std::vector<double> accuracies;
};

struct MetricsReport {
  std::string dataset;
  std::string scheme;
  std::string nctm;
  std::string cnm;
  double alpha = 0.5;
  double epsilon = 1.0;
  std::vector<std::uint64_t> seeds;
  std::vector<ModelMetrics> models;
};

// JSON document with stable key ordering; every model gets mean, population
// std, median, runs and the raw accuracies.
std::string metrics_to_json(const MetricsReport& report);
void write_metrics(const std::filesystem::path& path,
                   const MetricsReport& report);

// Training history as JSON lines {"epoch":..., "loss":..., "val_acc":...}.
void write_history(const std::filesystem::path& path,
                   const std::vector<EpochRecord>& history);

// Directed weight dump, same TSV shape as the curvature cache.
void write_weight_dump(const std::filesystem::path& path,
                       const WeightedAdjacency& w);

double mean_of(const std::vector<double>& values);
double population_std(const std::vector<double>& values);
double median_of(std::vector<double> values);

}  // namespace curvgraph
