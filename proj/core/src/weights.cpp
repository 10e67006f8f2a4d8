#include "curvgraph/weights.hpp"

#include <cmath>
#include <string>

#include "curvgraph/errors.hpp"

namespace curvgraph {

void NctmMode::validate() const {
  if (kind == NctmKind::kLinear && epsilon < 0.0) {
    throw InputError("nctm: epsilon must be >= 0");
  }
}

CurvatureMap inject_self_loops(CurvatureMap map, const Graph& g) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    map.set(i, i, 1.0);
  }
  return map;
}

CurvatureMap apply_nctm(CurvatureMap map, const NctmMode& mode) {
  mode.validate();
  switch (mode.kind) {
    case NctmKind::kNone:
      return map;
    case NctmKind::kLinear: {
      const double min = map.min_value();
      CurvatureMap out;
      for (const auto& [key, value] : map) {
        out.set(key.first, key.second, value - min + mode.epsilon);
      }
      return out;
    }
    case NctmKind::kSigmoid: {
      CurvatureMap out;
      for (const auto& [key, value] : map) {
        out.set(key.first, key.second, 1.0 / (1.0 + std::exp(-value)));
      }
      return out;
    }
  }
  return map;
}

std::vector<double> curvature_degrees(const CurvatureMap& map, const Graph& g) {
  std::vector<double> degrees(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (!map.contains(i, i)) {
      throw InputError("curvature_degrees: self-loop entry missing for node " +
                       std::to_string(i));
    }
    double d = map.at(i, i);
    for (NodeId j : g.neighbors(i)) d += map.at(i, j);
    degrees[i] = d;
  }
  return degrees;
}

WeightedAdjacency apply_cnm(const CurvatureMap& map, const Graph& g,
                            CnmMode mode) {
  const NodeId n = g.num_nodes();
  std::vector<double> degrees;
  if (mode != CnmMode::kNone) {
    degrees = curvature_degrees(map, g);
    for (NodeId i = 0; i < n; ++i) {
      if (degrees[i] == 0.0) {
        throw NormalizationError(
            i, "cnm: node " + std::to_string(i) + " has zero curvature-degree");
      }
      if (mode == CnmMode::kSymmetric && degrees[i] < 0.0) {
        throw NormalizationError(
            i, "cnm: node " + std::to_string(i) +
                   " has negative curvature-degree " +
                   std::to_string(degrees[i]) +
                   "; symmetric normalization would take the square root of a "
                   "negative product");
      }
    }
  }

  WeightedAdjacency w;
  w.offsets.assign(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    w.offsets[i + 1] = w.offsets[i] + g.degree(i) + 1;  // + self-loop
  }
  w.neighbors.resize(w.offsets[n]);
  w.tau.resize(w.offsets[n]);

  for (NodeId i = 0; i < n; ++i) {
    std::size_t pos = w.offsets[i];
    bool self_placed = false;
    auto place = [&](NodeId j) {
      double r = map.at(i, j);
      double t = r;
      switch (mode) {
        case CnmMode::kFirstHop:
          t = r / degrees[i];
          break;
        case CnmMode::kSecondHop:
          t = r / degrees[j];
          break;
        case CnmMode::kSymmetric:
          t = r / std::sqrt(degrees[i] * degrees[j]);
          break;
        case CnmMode::kNone:
          break;
      }
      w.neighbors[pos] = j;
      w.tau[pos] = t;
      ++pos;
    };
    for (NodeId j : g.neighbors(i)) {
      if (!self_placed && j > i) {
        place(i);
        self_placed = true;
      }
      place(j);
    }
    if (!self_placed) place(i);
  }
  return w;
}

WeightedAdjacency build_weights(const Graph& g, const CurvatureConfig& cfg,
                                const NctmMode& nctm, CnmMode cnm,
                                int threads) {
  return build_weights(g, graph_curvature(g, cfg, threads), nctm, cnm);
}

WeightedAdjacency build_weights(const Graph& g, CurvatureMap raw,
                                const NctmMode& nctm, CnmMode cnm) {
  CurvatureMap looped = inject_self_loops(std::move(raw), g);
  CurvatureMap transformed = apply_nctm(std::move(looped), nctm);
  return apply_cnm(transformed, g, cnm);
}

WeightedAdjacency gcn_weights(const Graph& g) {
  WeightedAdjacency w;
  const NodeId n = g.num_nodes();
  w.offsets.assign(n + 1, 0);
  for (NodeId i = 0; i < n; ++i) {
    w.offsets[i + 1] = w.offsets[i] + g.degree(i) + 1;
  }
  w.neighbors.resize(w.offsets[n]);
  w.tau.resize(w.offsets[n]);
  for (NodeId i = 0; i < n; ++i) {
    const double di = static_cast<double>(g.degree(i)) + 1.0;
    std::size_t pos = w.offsets[i];
    bool self_placed = false;
    auto place = [&](NodeId j) {
      const double dj = static_cast<double>(g.degree(j)) + 1.0;
      w.neighbors[pos] = j;
      w.tau[pos] = 1.0 / std::sqrt(di * dj);
      ++pos;
    };
    for (NodeId j : g.neighbors(i)) {
      if (!self_placed && j > i) {
        place(i);
        self_placed = true;
      }
      place(j);
    }
    if (!self_placed) place(i);
  }
  return w;
}

WeightedAdjacency identity_weights(NodeId num_nodes) {
  WeightedAdjacency w;
  w.offsets.resize(num_nodes + 1);
  w.neighbors.resize(num_nodes);
  w.tau.assign(num_nodes, 1.0);
  for (NodeId i = 0; i < num_nodes; ++i) {
    w.offsets[i] = i;
    w.neighbors[i] = i;
  }
  w.offsets[num_nodes] = num_nodes;
  return w;
}

}  // namespace curvgraph
