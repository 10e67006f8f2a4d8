#include "curvgraph/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "curvgraph/errors.hpp"

namespace curvgraph {

void DiscreteMeasure::validate() const {
  if (support.size() != masses.size()) {
    throw InputError("measure: support and mass lengths differ");
  }
  if (support.empty()) {
    throw InputError("measure: empty support");
  }
  double total = 0.0;
  for (double m : masses) {
    if (!(m > 0.0)) throw InputError("measure: masses must be strictly positive");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InputError("measure: masses sum to " + std::to_string(total) +
                     ", expected 1");
  }
  std::vector<NodeId> ids = support;
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw InputError("measure: duplicate support ids");
  }
}

void TransportProblem::validate() const {
  supply.validate();
  demand.validate();
  if (cost.size() != supply.size() * demand.size()) {
    throw InputError("transport: cost table size mismatch");
  }
  for (double c : cost) {
    if (std::isnan(c) || c < 0.0) {
      throw InputError("transport: costs must be nonnegative");
    }
  }
}

namespace {

// Residual arcs below this are treated as saturated; remaining supply below
// it terminates the augmentation loop.
constexpr double kFlowEps = 1e-15;
constexpr double kRemainderTol = 1e-12;

struct FloatArc {
  int to;
  double residual;
  double cost;
  int reverse;  // index of the paired arc in arcs[to]
};

class FloatFlowNetwork {
 public:
  explicit FloatFlowNetwork(int num_nodes) : arcs_(num_nodes) {}

  void add_arc(int from, int to, double capacity, double cost) {
    arcs_[from].push_back(
        {to, capacity, cost, static_cast<int>(arcs_[to].size())});
    arcs_[to].push_back(
        {from, 0.0, -cost, static_cast<int>(arcs_[from].size()) - 1});
  }

  std::vector<std::vector<FloatArc>> arcs_;
};

}  // namespace

double wasserstein1(const TransportProblem& p) {
  p.validate();

  const int n1 = static_cast<int>(p.supply.size());
  const int n2 = static_cast<int>(p.demand.size());
  const int source = 0;
  const int sink = n1 + n2 + 1;
  const int num_nodes = n1 + n2 + 2;

  FloatFlowNetwork net(num_nodes);
  double total_supply = 0.0;
  for (int u = 0; u < n1; ++u) {
    net.add_arc(source, 1 + u, p.supply.masses[u], 0.0);
    total_supply += p.supply.masses[u];
  }
  for (int v = 0; v < n2; ++v) {
    net.add_arc(1 + n1 + v, sink, p.demand.masses[v], 0.0);
  }
  for (int u = 0; u < n1; ++u) {
    for (int v = 0; v < n2; ++v) {
      double c = p.cost_at(u, v);
      if (c == kUnreachable) continue;
      net.add_arc(1 + u, 1 + n1 + v, std::numeric_limits<double>::infinity(), c);
    }
  }

  std::vector<double> potential(num_nodes, 0.0);
  std::vector<double> dist(num_nodes);
  std::vector<int> prev_node(num_nodes), prev_arc(num_nodes);

  double pushed = 0.0;
  double total_cost = 0.0;
  while (total_supply - pushed > kRemainderTol) {
    // Dijkstra over residual arcs with reduced costs.
    std::fill(dist.begin(), dist.end(), kUnreachable);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      const auto& row = net.arcs_[u];
      for (int k = 0; k < static_cast<int>(row.size()); ++k) {
        const FloatArc& arc = row[k];
        if (arc.residual <= kFlowEps) continue;
        double reduced = arc.cost + potential[u] - potential[arc.to];
        if (reduced < 0.0) reduced = 0.0;  // rounding guard
        double candidate = d + reduced;
        if (candidate < dist[arc.to]) {
          dist[arc.to] = candidate;
          prev_node[arc.to] = u;
          prev_arc[arc.to] = k;
          heap.emplace(candidate, arc.to);
        }
      }
    }
    if (dist[sink] == kUnreachable) break;

    for (int v = 0; v < num_nodes; ++v) {
      potential[v] += (dist[v] == kUnreachable) ? dist[sink] : dist[v];
    }

    double bottleneck = total_supply - pushed;
    for (int v = sink; v != source; v = prev_node[v]) {
      bottleneck =
          std::min(bottleneck, net.arcs_[prev_node[v]][prev_arc[v]].residual);
    }
    for (int v = sink; v != source; v = prev_node[v]) {
      FloatArc& arc = net.arcs_[prev_node[v]][prev_arc[v]];
      arc.residual -= bottleneck;
      net.arcs_[v][arc.reverse].residual += bottleneck;
      total_cost += bottleneck * arc.cost;
    }
    pushed += bottleneck;
  }

  if (total_supply - pushed > kRemainderTol) {
    throw InfeasibleTransport(
        "transport: " + std::to_string(total_supply - pushed) +
        " mass cannot be routed through finite-cost arcs");
  }
  return total_cost;
}

namespace {

constexpr long long kIntInf = std::numeric_limits<long long>::max() / 4;

struct IntArc {
  int to;
  long long residual;
  long long cost;
  int reverse;
};

long long gcd_ll(long long a, long long b) {
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Smallest denominator D <= max_den such that every mass is an integer
// multiple of 1/D (within reconstruction noise) and each side totals D.
long long common_denominator(const TransportProblem& p, long long max_den) {
  constexpr double kRationalTol = 1e-9;
  auto fits = [&](const std::vector<double>& masses, long long d) {
    long long total = 0;
    for (double m : masses) {
      double scaled = m * static_cast<double>(d);
      long long n = std::llround(scaled);
      if (n < 1 || std::abs(scaled - static_cast<double>(n)) > kRationalTol) {
        return false;
      }
      total += n;
    }
    return total == d;
  };
  for (long long d = 1; d <= max_den; ++d) {
    if (fits(p.supply.masses, d) && fits(p.demand.masses, d)) return d;
  }
  throw InputError(
      "transport oracle: masses are not rationals with denominator <= " +
      std::to_string(max_den));
}

}  // namespace

Rational wasserstein1_oracle(const TransportProblem& p,
                             long long max_denominator) {
  p.validate();

  const long long denom = common_denominator(p, max_denominator);
  const int n1 = static_cast<int>(p.supply.size());
  const int n2 = static_cast<int>(p.demand.size());
  const int source = 0;
  const int sink = n1 + n2 + 1;
  const int num_nodes = n1 + n2 + 2;

  std::vector<std::vector<IntArc>> arcs(num_nodes);
  auto add_arc = [&arcs](int from, int to, long long capacity, long long cost) {
    arcs[from].push_back({to, capacity, cost, static_cast<int>(arcs[to].size())});
    arcs[to].push_back(
        {from, 0, -cost, static_cast<int>(arcs[from].size()) - 1});
  };

  for (int u = 0; u < n1; ++u) {
    add_arc(source, 1 + u,
            std::llround(p.supply.masses[u] * static_cast<double>(denom)), 0);
  }
  for (int v = 0; v < n2; ++v) {
    add_arc(1 + n1 + v, sink,
            std::llround(p.demand.masses[v] * static_cast<double>(denom)), 0);
  }
  for (int u = 0; u < n1; ++u) {
    for (int v = 0; v < n2; ++v) {
      double c = p.cost_at(u, v);
      if (c == kUnreachable) continue;
      long long ic = std::llround(c);
      if (std::abs(c - static_cast<double>(ic)) > 1e-9) {
        throw InputError("transport oracle: costs must be integers");
      }
      add_arc(1 + u, 1 + n1 + v, kIntInf, ic);
    }
  }

  std::vector<long long> potential(num_nodes, 0);
  std::vector<long long> dist(num_nodes);
  std::vector<int> prev_node(num_nodes), prev_arc(num_nodes);

  long long remaining = denom;
  long long total_cost = 0;
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), kIntInf);
    dist[source] = 0;
    using Item = std::pair<long long, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.emplace(0, source);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      const auto& row = arcs[u];
      for (int k = 0; k < static_cast<int>(row.size()); ++k) {
        const IntArc& arc = row[k];
        if (arc.residual <= 0) continue;
        long long candidate = d + arc.cost + potential[u] - potential[arc.to];
        if (candidate < dist[arc.to]) {
          dist[arc.to] = candidate;
          prev_node[arc.to] = u;
          prev_arc[arc.to] = k;
          heap.emplace(candidate, arc.to);
        }
      }
    }
    if (dist[sink] >= kIntInf) {
      throw InfeasibleTransport(
          "transport oracle: " + std::to_string(remaining) + "/" +
          std::to_string(denom) +
          " mass cannot be routed through finite-cost arcs");
    }
    for (int v = 0; v < num_nodes; ++v) {
      potential[v] += (dist[v] >= kIntInf) ? dist[sink] : dist[v];
    }

    long long bottleneck = remaining;
    for (int v = sink; v != source; v = prev_node[v]) {
      bottleneck = std::min(bottleneck, arcs[prev_node[v]][prev_arc[v]].residual);
    }
    for (int v = sink; v != source; v = prev_node[v]) {
      IntArc& arc = arcs[prev_node[v]][prev_arc[v]];
      arc.residual -= bottleneck;
      arcs[v][arc.reverse].residual += bottleneck;
      total_cost += bottleneck * arc.cost;
    }
    remaining -= bottleneck;
  }

  long long g = gcd_ll(total_cost, denom);
  if (g == 0) return {0, 1};
  return {total_cost / g, denom / g};
}

}  // namespace curvgraph
