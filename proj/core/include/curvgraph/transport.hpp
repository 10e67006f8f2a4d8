#pragma once

#include <cstdint>
#include <vector>

#include "curvgraph/graph.hpp"

namespace curvgraph {

// Finitely supported probability measure over node ids.
struct DiscreteMeasure {
  std::vector<NodeId> support;
  std::vector<double> masses;

  std::size_t size() const noexcept { return support.size(); }

  // Enforces equal lengths, unique support ids, and strictly positive masses
  // summing to 1 within 1e-12. Throws InputError.
  void validate() const;
};

// Bipartite transportation problem. `cost` is row-major |supply| x |demand|;
// entries may be kUnreachable to mark forbidden routes.
struct TransportProblem {
  DiscreteMeasure supply;
  DiscreteMeasure demand;
  std::vector<double> cost;

  double cost_at(std::size_t u, std::size_t v) const {
    return cost[u * demand.size() + v];
  }

  void validate() const;
};

// Wasserstein-1 distance: the minimum of sum pi_uv * cost[u][v] over all
// couplings pi whose marginals are the supply and demand masses.
//
// Solved as min-cost flow with successive shortest augmenting paths
// (Dijkstra on reduced costs). The flow formulation has no simplex-style
// degeneracy: every augmentation saturates a source or sink arc outright,
// so no epsilon perturbation is needed. Reduced costs are clamped at zero
// against rounding noise below the 1e-12 termination tolerance.
//
// Throws InfeasibleTransport when some mass only routes through
// kUnreachable-cost arcs.
double wasserstein1(const TransportProblem& p);

// Exact nonnegative rational, normalized, positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  bool operator==(const Rational& other) const {
    return num == other.num && den == other.den;
  }
};

// Verification oracle: rescales both mass vectors to integers over the
// smallest common denominator (the masses must be small rationals and the
// costs integers, as is true for hop-distance problems), then solves the
// integer min-cost flow exactly. No floating point enters the optimization.
Rational wasserstein1_oracle(const TransportProblem& p,
                             long long max_denominator = 1 << 20);

}  // namespace curvgraph
