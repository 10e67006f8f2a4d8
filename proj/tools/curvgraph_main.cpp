#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "curvgraph/curvature.hpp"
#include "curvgraph/errors.hpp"
#include "curvgraph/io.hpp"
#include "curvgraph/nn.hpp"
#include "curvgraph/parallel.hpp"
#include "curvgraph/synth.hpp"
#include "curvgraph/weights.hpp"

namespace fs = std::filesystem;
using namespace curvgraph;

namespace {

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct DatasetOptions {
  std::string dataset;  // "sbm", "er", "ba", or a bundle path prefix
  NodeId n = 1000;
  int blocks = 5;
  double p = 0.15;
  double q = 0.025;
  NodeId ba_m = 2;
  int feat_dim = 20;
  int train_per_class = 20;
  int val_count = 300;
};

struct ModelOptions {
  std::string scheme = "curvature";
  std::string nctm = "linear";
  double epsilon = 1.0;
  std::string cnm = "sym";
  double alpha = 0.5;
  int hidden = 8;
  int runs = 10;
  std::uint64_t seed = 2020;
  double lr = 0.005;
  double l2 = 5e-4;
  int patience = 100;
  int max_epochs = 1000;
  double dropout = 0.0;
  int threads = 0;
};

void add_dataset_flags(CLI::App* cmd, DatasetOptions& opts) {
  cmd->add_option("--dataset", opts.dataset,
                  "sbm | er | ba | path prefix of a saved bundle")
      ->required();
  cmd->add_option("--n", opts.n, "nodes for synthetic datasets");
  cmd->add_option("--blocks", opts.blocks, "classes for synthetic datasets");
  cmd->add_option("--p", opts.p, "intra-block (sbm) or edge (er) probability");
  cmd->add_option("--q", opts.q, "inter-block probability (sbm)");
  cmd->add_option("--m", opts.ba_m, "edges per arriving node (ba)");
  cmd->add_option("--feat-dim", opts.feat_dim, "random feature dimension");
  cmd->add_option("--train-per-class", opts.train_per_class);
  cmd->add_option("--val-count", opts.val_count);
}

void add_model_flags(CLI::App* cmd, ModelOptions& opts, bool with_scheme = true) {
  if (with_scheme) {
    cmd->add_option("--scheme", opts.scheme, "curvature | gcn | mlp")
        ->check(CLI::IsMember({"curvature", "gcn", "mlp"}));
    cmd->add_option("--nctm", opts.nctm, "linear | sigmoid | none")
        ->check(CLI::IsMember({"linear", "sigmoid", "none"}));
    cmd->add_option("--cnm", opts.cnm, "first | second | sym | none")
        ->check(CLI::IsMember({"first", "second", "sym", "none"}));
  }
  cmd->add_option("--epsilon", opts.epsilon, "linear transform offset");
  cmd->add_option("--alpha", opts.alpha, "curvature laziness parameter")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--hidden", opts.hidden, "hidden layer width");
  cmd->add_option("--runs", opts.runs, "repeat runs (seed, seed+1, ...)");
  cmd->add_option("--seed", opts.seed);
  cmd->add_option("--lr", opts.lr);
  cmd->add_option("--l2", opts.l2);
  cmd->add_option("--patience", opts.patience);
  cmd->add_option("--max-epochs", opts.max_epochs);
  cmd->add_option("--dropout", opts.dropout)->check(CLI::Range(0.0, 0.9999));
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = auto, capped by CURVGRAPH_THREADS)");
}

NctmMode parse_nctm(const std::string& name, double epsilon) {
  if (name == "linear") return NctmMode::linear(epsilon);
  if (name == "sigmoid") return NctmMode::sigmoid();
  return NctmMode::none();
}

CnmMode parse_cnm(const std::string& name) {
  if (name == "first") return CnmMode::kFirstHop;
  if (name == "second") return CnmMode::kSecondHop;
  if (name == "sym") return CnmMode::kSymmetric;
  return CnmMode::kNone;
}

ModelConfig to_model_config(const ModelOptions& opts) {
  ModelConfig cfg;
  cfg.hidden_dim = opts.hidden;
  cfg.scheme = opts.scheme == "gcn"   ? WeightScheme::kGcn
               : opts.scheme == "mlp" ? WeightScheme::kMlp
                                      : WeightScheme::kCurvature;
  cfg.nctm = parse_nctm(opts.nctm, opts.epsilon);
  cfg.cnm = parse_cnm(opts.cnm);
  cfg.alpha = opts.alpha;
  cfg.lr = opts.lr;
  cfg.l2 = opts.l2;
  cfg.patience = opts.patience;
  cfg.max_epochs = opts.max_epochs;
  cfg.seed = opts.seed;
  cfg.dropout = opts.dropout;
  cfg.validate();
  return cfg;
}

// Paper-style display names: linear -> Linear, sigmoid -> Exp; first -> 1st,
// second -> 2nd, sym -> Sym.
std::string model_display_name(const ModelConfig& cfg) {
  switch (cfg.scheme) {
    case WeightScheme::kGcn:
      return "GCN";
    case WeightScheme::kMlp:
      return "MLP";
    case WeightScheme::kCurvature:
      break;
  }
  auto nctm_name = [&]() {
    switch (cfg.nctm.kind) {
      case NctmKind::kLinear: return "Linear";
      case NctmKind::kSigmoid: return "Exp";
      case NctmKind::kNone: return "None";
    }
    return "?";
  };
  auto cnm_name = [&]() {
    switch (cfg.cnm) {
      case CnmMode::kFirstHop: return "1st";
      case CnmMode::kSecondHop: return "2nd";
      case CnmMode::kSymmetric: return "Sym";
      case CnmMode::kNone: return "None";
    }
    return "?";
  };
  return std::string("CGNN_") + nctm_name() + "_" + cnm_name();
}

std::string nctm_flag_name(const ModelConfig& cfg) {
  switch (cfg.nctm.kind) {
    case NctmKind::kLinear: return "linear";
    case NctmKind::kSigmoid: return "sigmoid";
    case NctmKind::kNone: return "none";
  }
  return "?";
}

std::string cnm_flag_name(const ModelConfig& cfg) {
  switch (cfg.cnm) {
    case CnmMode::kFirstHop: return "first";
    case CnmMode::kSecondHop: return "second";
    case CnmMode::kSymmetric: return "sym";
    case CnmMode::kNone: return "none";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Curvature reuse across runs and schemes
// ---------------------------------------------------------------------------

class CurvatureStore {
 public:
  explicit CurvatureStore(fs::path cache_dir = {}) : dir_(std::move(cache_dir)) {}

  std::shared_ptr<const CurvatureMap> get(const Graph& g, double alpha,
                                          int threads) {
    const Key key{content_hash(g), alpha};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memory_.find(key);
      if (it != memory_.end()) return it->second;
    }
    std::shared_ptr<const CurvatureMap> map;
    const fs::path file = disk_path(key);
    if (!dir_.empty() && fs::exists(file)) {
      map = std::make_shared<CurvatureMap>(read_curvature_cache(file).map);
    } else {
      map = std::make_shared<CurvatureMap>(
          graph_curvature(g, CurvatureConfig{alpha}, threads));
      if (!dir_.empty()) {
        fs::create_directories(dir_);
        write_curvature_cache(file, *map, alpha, g.num_nodes());
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    return memory_.emplace(key, std::move(map)).first->second;
  }

 private:
  using Key = std::pair<std::uint64_t, double>;

  fs::path disk_path(const Key& key) const {
    char name[64];
    std::snprintf(name, sizeof(name), "%016llx_a%.6f.ricci",
                  static_cast<unsigned long long>(key.first), key.second);
    return dir_ / name;
  }

  fs::path dir_;
  std::mutex mu_;
  std::map<Key, std::shared_ptr<const CurvatureMap>> memory_;
};

WeightedAdjacency weights_for(const DatasetBundle& data, const ModelConfig& cfg,
                              CurvatureStore& store, int threads) {
  switch (cfg.scheme) {
    case WeightScheme::kGcn:
      return gcn_weights(data.graph);
    case WeightScheme::kMlp:
      return identity_weights(data.graph.num_nodes());
    case WeightScheme::kCurvature:
      break;
  }
  auto raw = store.get(data.graph, cfg.alpha, threads);
  return build_weights(data.graph, *raw, cfg.nctm, cfg.cnm);
}

// ---------------------------------------------------------------------------
// Dataset providers
// ---------------------------------------------------------------------------

bool is_synthetic(const std::string& name) {
  return name == "sbm" || name == "er" || name == "ba";
}

DatasetBundle make_synthetic(const DatasetOptions& opts, std::uint64_t seed) {
  DatasetBundle data;
  data.name = opts.dataset;
  if (opts.dataset == "sbm") {
    SbmSpec spec{opts.n, opts.blocks, opts.p, opts.q, seed};
    auto [graph, labels] = gen_sbm(spec);
    data.graph = std::move(graph);
    data.labels = std::move(labels);
  } else if (opts.dataset == "er") {
    data.graph = gen_er(opts.n, opts.p, seed);
    data.labels = block_labels(opts.n, opts.blocks);
  } else {
    data.graph = gen_ba(opts.n, opts.ba_m, seed);
    data.labels = block_labels(opts.n, opts.blocks);
  }
  auto [features, splits] = gen_features_and_splits(
      data.labels, opts.feat_dim, seed, opts.train_per_class, opts.val_count);
  data.features = std::move(features);
  data.splits = std::move(splits);
  data.validate();
  return data;
}

// Per-seed run inputs: synthetic datasets are regenerated per seed, file
// bundles are fixed with only the model seed varying.
RunProvider make_provider(const DatasetOptions& opts, const ModelConfig& cfg,
                          CurvatureStore& store, int threads) {
  if (is_synthetic(opts.dataset)) {
    return [opts, cfg, &store, threads](std::uint64_t seed) {
      auto data = std::make_shared<const DatasetBundle>(make_synthetic(opts, seed));
      auto weights = std::make_shared<const WeightedAdjacency>(
          weights_for(*data, cfg, store, threads));
      return RunInput{std::move(data), std::move(weights)};
    };
  }
  auto data = std::make_shared<const DatasetBundle>(
      load_bundle(opts.dataset, fs::path(opts.dataset).filename().string()));
  auto weights = std::make_shared<const WeightedAdjacency>(
      weights_for(*data, cfg, store, threads));
  return [data, weights](std::uint64_t) { return RunInput{data, weights}; };
}

void emit_metrics(const std::string& out, const MetricsReport& report) {
  if (out.empty()) {
    std::cout << metrics_to_json(report) << "\n";
  } else {
    write_metrics(out, report);
  }
}

MetricsReport base_report(const std::string& dataset, const ModelConfig& cfg,
                          int runs) {
  MetricsReport report;
  report.dataset = dataset;
  report.scheme = cfg.scheme == WeightScheme::kGcn   ? "gcn"
                  : cfg.scheme == WeightScheme::kMlp ? "mlp"
                                                     : "curvature";
  report.nctm = nctm_flag_name(cfg);
  report.cnm = cnm_flag_name(cfg);
  report.alpha = cfg.alpha;
  report.epsilon = cfg.nctm.epsilon;
  for (int r = 0; r < runs; ++r) report.seeds.push_back(cfg.seed + r);
  return report;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_curvature(const std::string& edges_path, double alpha,
                  const std::string& out, bool oracle_check, int threads) {
  EdgeListFile file = read_edgelist(edges_path);
  const Graph& g = file.graph;
  CurvatureConfig cfg{alpha};
  CurvatureMap map = graph_curvature(g, cfg, resolve_threads(threads));
  write_curvature_cache(out, map, alpha, g.num_nodes());
  if (file.remapped) {
    std::ofstream idmap(out + ".idmap");
    for (std::size_t k = 0; k < file.id_map.size(); ++k) {
      idmap << k << '\t' << file.id_map[k] << "\n";
    }
    std::cerr << "note: non-dense ids remapped; map written to " << out
              << ".idmap\n";
  }
  std::cerr << "wrote " << map.size() << " edge curvatures to " << out << "\n";

  if (oracle_check) {
    double worst = 0.0;
    for (const auto& [key, value] : map) {
      DiscreteMeasure supply = node_measure(g, key.first, cfg);
      DiscreteMeasure demand = node_measure(g, key.second, cfg);
      TransportProblem problem;
      auto table = restricted_distances(g, supply.support, demand.support);
      problem.cost.resize(supply.size() * demand.size());
      for (std::size_t a = 0; a < supply.size(); ++a) {
        for (std::size_t b = 0; b < demand.size(); ++b) {
          problem.cost[a * demand.size() + b] = table[a][b];
        }
      }
      problem.supply = std::move(supply);
      problem.demand = std::move(demand);
      double reference = 1.0 - wasserstein1_oracle(problem).to_double();
      worst = std::max(worst, std::abs(value - reference));
    }
    std::cerr << "oracle check: max deviation " << worst << " over "
              << map.size() << " edges\n";
    if (worst > 1e-9) {
      std::cerr << "oracle check FAILED (tolerance 1e-9)\n";
      return 1;
    }
  }
  return 0;
}

int cmd_synth(const DatasetOptions& opts, std::uint64_t seed,
              const std::string& out_prefix) {
  if (!is_synthetic(opts.dataset)) {
    throw InputError("synth: --dataset must be sbm, er, or ba");
  }
  DatasetBundle data = make_synthetic(opts, seed);
  save_bundle(out_prefix, data);
  std::cerr << "wrote " << data.graph.num_nodes() << " nodes / "
            << data.graph.num_edges() << " edges under " << out_prefix
            << ".{edges,features.csv,labels,splits}\n";
  return 0;
}

int cmd_train(const DatasetOptions& dataset_opts, const ModelOptions& opts,
              const std::string& out, const std::string& history_out,
              const std::string& cache_dir) {
  const ModelConfig cfg = to_model_config(opts);
  const int threads = resolve_threads(opts.threads);
  CurvatureStore store{cache_dir.empty() ? fs::path{} : fs::path(cache_dir)};
  RunProvider provider = make_provider(dataset_opts, cfg, store, threads);

  if (!history_out.empty()) {
    RunInput first = provider(cfg.seed);
    TrainResult result = train(*first.data, *first.weights, cfg);
    write_history(history_out, result.history);
  }

  ExperimentResult result = run_experiment(provider, cfg, opts.runs, threads);
  MetricsReport report = base_report(dataset_opts.dataset, cfg, opts.runs);
  report.models.push_back({model_display_name(cfg), result.accuracies});
  emit_metrics(out, report);
  return 0;
}

int cmd_sweep(const std::string& model, const std::string& grid,
              std::vector<double> ps, std::vector<double> qs,
              const DatasetOptions& base_opts, const ModelOptions& opts,
              const std::vector<std::string>& schemes, const std::string& out_dir,
              const std::string& cache_dir) {
  if (model != "sbm") throw InputError("sweep: only --model sbm is supported");
  if (grid == "default" && ps.empty()) {
    for (int k = 0; k < 10; ++k) ps.push_back(0.05 + 0.02 * k);
  }
  if (grid == "default" && qs.empty()) {
    for (int k = 0; k < 10; ++k) qs.push_back(0.005 * k);
  }
  if (ps.empty() || qs.empty()) {
    throw InputError("sweep: empty probability grid");
  }
  fs::create_directories(out_dir);
  const int threads = resolve_threads(opts.threads);
  CurvatureStore store{cache_dir.empty() ? fs::path{} : fs::path(cache_dir)};

  std::ofstream heatmap(fs::path(out_dir) / "heatmap.csv");
  heatmap << "p,q,scheme,mean,std\n";
  for (double p : ps) {
    for (double q : qs) {
      DatasetOptions cell = base_opts;
      cell.dataset = "sbm";
      cell.p = p;
      cell.q = q;
      MetricsReport report;
      bool first_scheme = true;
      for (const std::string& scheme : schemes) {
        ModelOptions cell_opts = opts;
        cell_opts.scheme = scheme;
        ModelConfig cfg = to_model_config(cell_opts);
        RunProvider provider = make_provider(cell, cfg, store, threads);
        ExperimentResult result =
            run_experiment(provider, cfg, opts.runs, threads);
        if (first_scheme) {
          report = base_report("sbm", cfg, opts.runs);
          first_scheme = false;
        }
        report.models.push_back({model_display_name(cfg), result.accuracies});
        char row[256];
        std::snprintf(row, sizeof(row), "%.3f,%.3f,%s,%.6f,%.6f\n", p, q,
                      model_display_name(cfg).c_str(), result.mean,
                      result.stddev);
        heatmap << row;
      }
      char name[64];
      std::snprintf(name, sizeof(name), "sbm_p%.3f_q%.3f.json", p, q);
      write_metrics(fs::path(out_dir) / name, report);
      std::cerr << "cell p=" << p << " q=" << q << " done\n";
    }
  }
  std::cerr << "sweep finished: " << ps.size() * qs.size() << " cells in "
            << out_dir << "\n";
  return 0;
}

int cmd_ablate(const DatasetOptions& dataset_opts, const ModelOptions& opts,
               const std::string& out, const std::string& cache_dir) {
  const int threads = resolve_threads(opts.threads);
  CurvatureStore store{cache_dir.empty() ? fs::path{} : fs::path(cache_dir)};

  nlohmann::ordered_json doc;
  doc["dataset"] = dataset_opts.dataset;
  doc["alpha"] = opts.alpha;
  doc["epsilon"] = opts.epsilon;
  doc["runs"] = opts.runs;
  doc["combos"] = nlohmann::ordered_json::array();

  for (const std::string& nctm : {"linear", "sigmoid", "none"}) {
    for (const std::string& cnm : {"first", "second", "sym", "none"}) {
      ModelOptions combo = opts;
      combo.scheme = "curvature";
      combo.nctm = nctm;
      combo.cnm = cnm;
      ModelConfig cfg = to_model_config(combo);
      nlohmann::ordered_json row;
      row["name"] = model_display_name(cfg);
      row["nctm"] = nctm;
      row["cnm"] = cnm;
      try {
        RunProvider provider = make_provider(dataset_opts, cfg, store, threads);
        ExperimentResult result =
            run_experiment(provider, cfg, opts.runs, threads);
        row["status"] = "ok";
        row["mean"] = result.mean;
        row["std"] = result.stddev;
        row["accuracies"] = result.accuracies;
      } catch (const NormalizationError& e) {
        row["status"] = "error";
        row["error"] = e.what();
        row["node"] = e.node();
      } catch (const DivergenceError& e) {
        row["status"] = "error";
        row["error"] = e.what();
      }
      doc["combos"].push_back(std::move(row));
      std::cerr << "ablate " << nctm << "/" << cnm << ": "
                << doc["combos"].back()["status"].get<std::string>() << "\n";
    }
  }

  if (out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream file(out);
    file << doc.dump(2) << "\n";
  }
  return 0;
}

int cmd_football(const std::string& gml_path, const ModelOptions& opts,
                 const std::string& out, const std::string& cache_dir) {
  const int threads = resolve_threads(opts.threads);
  CurvatureStore store{cache_dir.empty() ? fs::path{} : fs::path(cache_dir)};

  MetricsReport report;
  bool first = true;
  for (const std::string& scheme : {"curvature", "gcn", "mlp"}) {
    ModelOptions run_opts = opts;
    run_opts.scheme = scheme;
    ModelConfig cfg = to_model_config(run_opts);
    // Every seed re-picks the one labeled node per class.
    RunProvider provider = [&gml_path, cfg, &store, threads](std::uint64_t seed) {
      auto data = std::make_shared<const DatasetBundle>(
          football_bundle(gml_path, seed));
      auto weights = std::make_shared<const WeightedAdjacency>(
          weights_for(*data, cfg, store, threads));
      return RunInput{std::move(data), std::move(weights)};
    };
    ExperimentResult result = run_experiment(provider, cfg, opts.runs, threads);
    if (first) {
      report = base_report("football", cfg, opts.runs);
      first = false;
    }
    report.models.push_back({model_display_name(cfg), result.accuracies});
  }
  emit_metrics(out, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature-weighted graph neural network toolkit"};
  app.require_subcommand(1);

  // --- curvature ---
  std::string curv_edges, curv_out;
  double curv_alpha = 0.5;
  bool curv_oracle = false;
  int curv_threads = 0;
  auto* curvature_cmd =
      app.add_subcommand("curvature", "Edge curvature of an edge-list graph");
  curvature_cmd->add_option("--edges", curv_edges, "edge list file")->required();
  curvature_cmd->add_option("--alpha", curv_alpha)->check(CLI::Range(0.0, 1.0));
  curvature_cmd->add_option("--out", curv_out, "curvature cache file")->required();
  curvature_cmd->add_flag("--oracle-check", curv_oracle,
                          "verify every edge against the exact integer solver");
  curvature_cmd->add_option("--threads", curv_threads);

  // --- synth ---
  DatasetOptions synth_data;
  std::uint64_t synth_seed = 2020;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--model", synth_data.dataset, "sbm | er | ba")
      ->required()
      ->check(CLI::IsMember({"sbm", "er", "ba"}));
  synth_cmd->add_option("--n", synth_data.n);
  synth_cmd->add_option("--blocks", synth_data.blocks);
  synth_cmd->add_option("--p", synth_data.p);
  synth_cmd->add_option("--q", synth_data.q);
  synth_cmd->add_option("--m", synth_data.ba_m);
  synth_cmd->add_option("--feat-dim", synth_data.feat_dim);
  synth_cmd->add_option("--train-per-class", synth_data.train_per_class);
  synth_cmd->add_option("--val-count", synth_data.val_count);
  synth_cmd->add_option("--seed", synth_seed);
  synth_cmd->add_option("--out", synth_out, "output file prefix")->required();

  // --- train ---
  DatasetOptions train_data;
  ModelOptions train_model;
  std::string train_out, train_history, train_cache;
  auto* train_cmd = app.add_subcommand("train", "Train and evaluate one scheme");
  add_dataset_flags(train_cmd, train_data);
  add_model_flags(train_cmd, train_model);
  train_cmd->add_option("--out", train_out, "metrics JSON (stdout if omitted)");
  train_cmd->add_option("--history-out", train_history,
                        "JSONL training history of the first run");
  train_cmd->add_option("--cache-dir", train_cache,
                        "directory for on-disk curvature caches");

  // --- sweep ---
  std::string sweep_model = "sbm", sweep_grid = "default", sweep_out, sweep_cache;
  std::vector<double> sweep_ps, sweep_qs;
  std::vector<std::string> sweep_schemes{"curvature", "gcn"};
  DatasetOptions sweep_data;
  ModelOptions sweep_opts;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Probability-grid sweep over block models");
  sweep_cmd->add_option("--model", sweep_model)->check(CLI::IsMember({"sbm"}));
  sweep_cmd->add_option("--grid", sweep_grid, "default or custom via --ps/--qs");
  sweep_cmd->add_option("--ps", sweep_ps, "intra-block probabilities")
      ->delimiter(',');
  sweep_cmd->add_option("--qs", sweep_qs, "inter-block probabilities")
      ->delimiter(',');
  sweep_cmd->add_option("--schemes", sweep_schemes)->delimiter(',');
  sweep_cmd->add_option("--n", sweep_data.n);
  sweep_cmd->add_option("--blocks", sweep_data.blocks);
  sweep_cmd->add_option("--feat-dim", sweep_data.feat_dim);
  add_model_flags(sweep_cmd, sweep_opts, false);
  sweep_cmd->add_option("--nctm", sweep_opts.nctm)
      ->check(CLI::IsMember({"linear", "sigmoid", "none"}));
  sweep_cmd->add_option("--cnm", sweep_opts.cnm)
      ->check(CLI::IsMember({"first", "second", "sym", "none"}));
  sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
  sweep_cmd->add_option("--cache-dir", sweep_cache);

  // --- ablate ---
  DatasetOptions ablate_data;
  ModelOptions ablate_opts;
  std::string ablate_out, ablate_cache;
  auto* ablate_cmd = app.add_subcommand(
      "ablate", "Cross product of transformation and normalization modes");
  add_dataset_flags(ablate_cmd, ablate_data);
  add_model_flags(ablate_cmd, ablate_opts, false);
  ablate_cmd->add_option("--out", ablate_out, "JSON report (stdout if omitted)");
  ablate_cmd->add_option("--cache-dir", ablate_cache);

  // --- football ---
  std::string football_gml, football_out, football_cache;
  ModelOptions football_opts;
  football_opts.max_epochs = 300;
  football_opts.patience = 300;
  auto* football_cmd = app.add_subcommand(
      "football", "One-label-per-class community case study from a GML file");
  football_cmd->add_option("--gml", football_gml, "GML file")->required();
  add_model_flags(football_cmd, football_opts);
  football_cmd->add_option("--out", football_out);
  football_cmd->add_option("--cache-dir", football_cache);

  CLI11_PARSE(app, argc, argv);

  try {
    if (curvature_cmd->parsed()) {
      return cmd_curvature(curv_edges, curv_alpha, curv_out, curv_oracle,
                           curv_threads);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(synth_data, synth_seed, synth_out);
    }
    if (train_cmd->parsed()) {
      return cmd_train(train_data, train_model, train_out, train_history,
                       train_cache);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_model, sweep_grid, sweep_ps, sweep_qs, sweep_data,
                       sweep_opts, sweep_schemes, sweep_out, sweep_cache);
    }
    if (ablate_cmd->parsed()) {
      return cmd_ablate(ablate_data, ablate_opts, ablate_out, ablate_cache);
    }
    if (football_cmd->parsed()) {
      return cmd_football(football_gml, football_opts, football_out,
                          football_cache);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
