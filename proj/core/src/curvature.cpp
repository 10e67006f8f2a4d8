#include "curvgraph/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "curvgraph/errors.hpp"
#include "curvgraph/parallel.hpp"

namespace curvgraph {

void CurvatureConfig::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InputError("curvature: alpha must lie in [0, 1), got " +
                     std::to_string(alpha));
  }
}

double CurvatureMap::at(NodeId i, NodeId j) const {
  auto it = values_.find(make_edge_key(i, j));
  if (it == values_.end()) {
    throw InputError("curvature map: no entry for edge (" + std::to_string(i) +
                     ", " + std::to_string(j) + ")");
  }
  return it->second;
}

double CurvatureMap::min_value() const {
  if (values_.empty()) throw InputError("curvature map: empty");
  double m = values_.begin()->second;
  for (const auto& [key, value] : values_) m = std::min(m, value);
  return m;
}

DiscreteMeasure node_measure(const Graph& g, NodeId i,
                             const CurvatureConfig& cfg) {
  cfg.validate();
  if (i >= g.num_nodes()) {
    throw InputError("node_measure: node id out of range");
  }
  auto nbrs = g.neighbors(i);
  DiscreteMeasure m;
  if (nbrs.empty()) {
    m.support = {i};
    m.masses = {1.0};
    return m;
  }
  if (cfg.alpha > 0.0) {
    m.support.push_back(i);
    m.masses.push_back(cfg.alpha);
  }
  const double share = (1.0 - cfg.alpha) / static_cast<double>(nbrs.size());
  for (NodeId v : nbrs) {
    m.support.push_back(v);
    m.masses.push_back(share);
  }
  return m;
}

namespace {

using DistanceFn = std::function<double(NodeId, NodeId)>;

// W(m_i, m_j) with hop-distance costs. Mass shared by both supports is
// settled in place first: hop distance is a metric, so an optimal plan never
// moves it, and dropping it shrinks the flow problem without changing the
// optimum. The reduced measures are rescaled to probability measures for the
// solver and the result scaled back.
double measure_distance(DiscreteMeasure supply, DiscreteMeasure demand,
                        const DistanceFn& dist) {
  for (std::size_t a = 0; a < supply.support.size(); ++a) {
    for (std::size_t b = 0; b < demand.support.size(); ++b) {
      if (supply.support[a] == demand.support[b]) {
        double shared = std::min(supply.masses[a], demand.masses[b]);
        supply.masses[a] -= shared;
        demand.masses[b] -= shared;
        break;
      }
    }
  }
  auto compact = [](DiscreteMeasure& m) {
    double remaining = 0.0;
    std::size_t keep = 0;
    for (std::size_t k = 0; k < m.support.size(); ++k) {
      if (m.masses[k] > 0.0) {
        m.support[keep] = m.support[k];
        m.masses[keep] = m.masses[k];
        remaining += m.masses[k];
        ++keep;
      }
    }
    m.support.resize(keep);
    m.masses.resize(keep);
    return remaining;
  };
  double supply_left = compact(supply);
  double demand_left = compact(demand);
  if (supply.support.empty() || demand.support.empty()) return 0.0;

  double scale = std::max(supply_left, demand_left);
  for (double& m : supply.masses) m /= supply_left;
  for (double& m : demand.masses) m /= demand_left;

  TransportProblem problem;
  problem.cost.resize(supply.support.size() * demand.support.size());
  for (std::size_t a = 0; a < supply.support.size(); ++a) {
    for (std::size_t b = 0; b < demand.support.size(); ++b) {
      problem.cost[a * demand.support.size() + b] =
          dist(supply.support[a], demand.support[b]);
    }
  }
  problem.supply = std::move(supply);
  problem.demand = std::move(demand);
  return scale * wasserstein1(problem);
}

double edge_curvature_with(const Graph& g, NodeId i, NodeId j,
                           const CurvatureConfig& cfg, const DistanceFn& dist) {
  DiscreteMeasure mi = node_measure(g, i, cfg);
  DiscreteMeasure mj = node_measure(g, j, cfg);
  double w = measure_distance(std::move(mi), std::move(mj), dist);
  const double endpoint_distance = 1.0;  // (i, j) is an edge, unweighted graph
  return 1.0 - w / endpoint_distance;
}

// Above this node count the per-edge BFS path is used instead of one dense
// hop table; the two paths produce identical values.
constexpr NodeId kDistanceTableMaxNodes = 4096;

}  // namespace

double edge_curvature(const Graph& g, NodeId i, NodeId j,
                      const CurvatureConfig& cfg) {
  if (!g.has_edge(i, j)) {
    throw InputError("edge_curvature: (" + std::to_string(i) + ", " +
                     std::to_string(j) + ") is not an edge");
  }
  DiscreteMeasure mi = node_measure(g, i, cfg);
  DiscreteMeasure mj = node_measure(g, j, cfg);
  // One restricted BFS table over the two supports.
  std::vector<NodeId> sources = mi.support;
  std::vector<NodeId> targets = mj.support;
  auto table = restricted_distances(g, sources, targets);
  auto position = [](const std::vector<NodeId>& ids, NodeId v) {
    return static_cast<std::size_t>(
        std::find(ids.begin(), ids.end(), v) - ids.begin());
  };
  DistanceFn dist = [&](NodeId u, NodeId v) {
    return table[position(sources, u)][position(targets, v)];
  };
  double w = measure_distance(std::move(mi), std::move(mj), dist);
  const double endpoint_distance = 1.0;
  return 1.0 - w / endpoint_distance;
}

CurvatureMap graph_curvature(const Graph& g, const CurvatureConfig& cfg,
                             int threads) {
  cfg.validate();
  const auto edges = g.edge_list();
  std::vector<double> kappa(edges.size());
  const int workers = resolve_threads(threads);

  if (!edges.empty() && g.num_nodes() <= kDistanceTableMaxNodes) {
    const std::size_t n = g.num_nodes();
    std::vector<std::uint16_t> hops(n * n);
    parallel_for(n, workers, [&](std::size_t s) {
      auto row = bfs_hops(g, static_cast<NodeId>(s));
      std::copy(row.begin(), row.end(), hops.begin() + s * n);
    });
    DistanceFn dist = [&hops, n](NodeId u, NodeId v) {
      std::uint16_t h = hops[static_cast<std::size_t>(u) * n + v];
      return h == kUnreachableHops ? kUnreachable : static_cast<double>(h);
    };
    parallel_for(edges.size(), workers, [&](std::size_t e) {
      kappa[e] = edge_curvature_with(g, edges[e].first, edges[e].second, cfg,
                                     dist);
    });
  } else {
    parallel_for(edges.size(), workers, [&](std::size_t e) {
      kappa[e] = edge_curvature(g, edges[e].first, edges[e].second, cfg);
    });
  }

  CurvatureMap map;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    map.set(edges[e].first, edges[e].second, kappa[e]);
  }
  return map;
}

void write_curvature_cache(const std::filesystem::path& path,
                           const CurvatureMap& map, double alpha,
                           NodeId num_nodes) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot open " + path.string() + " for writing");
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", alpha);
  out << "#ricci alpha=" << buffer << " nodes=" << num_nodes
      << " edges=" << map.size() << "\n";
  for (const auto& [key, value] : map) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out << key.first << '\t' << key.second << '\t' << buffer << "\n";
  }
  if (!out) throw InputError("failed writing " + path.string());
}

CurvatureCacheFile read_curvature_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty curvature cache");

  CurvatureCacheFile file;
  unsigned long long nodes = 0, edges = 0;
  if (std::sscanf(line.c_str(), "#ricci alpha=%lf nodes=%llu edges=%llu",
                  &file.alpha, &nodes, &edges) != 3) {
    throw ParseError(1, "malformed curvature cache header: " + line);
  }
  file.num_nodes = static_cast<NodeId>(nodes);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    unsigned long i = 0, j = 0;
    double value = 0.0;
    if (std::sscanf(line.c_str(), "%lu\t%lu\t%lf", &i, &j, &value) != 3 ||
        i >= j) {
      throw ParseError(line_no, "malformed curvature cache line: " + line);
    }
    file.map.set(static_cast<NodeId>(i), static_cast<NodeId>(j), value);
  }
  if (file.map.size() != edges) {
    throw ParseError(line_no, "curvature cache edge count mismatch");
  }
  return file;
}

}  // namespace curvgraph
