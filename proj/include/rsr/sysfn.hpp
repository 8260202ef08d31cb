#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rsr/model.hpp"

namespace rsr {

struct Point {
  double x;
  double y;
};

/// How a random geometric graph was produced.
struct GraphProvenance {
  std::uint64_t seed = 0;
  double radius = 0.0;
  int requested_nodes = 0;
  int attempts = 0;
  bool largest_component_only = false;
};

/// Undirected graph; edge n is component n in edge-failure systems.
struct Graph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<Point> positions;  // empty unless geometric
  std::optional<GraphProvenance> provenance;

  int n_edges() const { return static_cast<int>(edges.size()); }

  /// Throws ModelError on out-of-range endpoints or self-loops.
  void validate() const;
};

// Binary graph functions treat an edge as surviving iff its state is >= 1.

/// 1 iff origin and destination are connected through surviving edges.
PerformanceFn single_od_connectivity(const Graph& graph, int origin, int destination);

/// 1 iff the surviving subgraph connects all nodes.
PerformanceFn global_connectivity(const Graph& graph);

/// min(max_level, min over node pairs of edge-disjoint path count).
PerformanceFn edge_disjoint_level(const Graph& graph, int max_level);

/// Generalized k-out-of-N:G, Phi(x) = max{m : at least k components at >= m}.
PerformanceFn k_out_of_n(int k, int n_components);

/// Phi(x) = largest l such that x dominates some member of generators[l-1],
/// else 0. Monotone for any generator sets.
PerformanceFn generator_union(std::vector<std::vector<StateVector>> generators);

/// Wraps a graph function into a model with one component per edge.
SystemModel make_graph_model(const Graph& graph, PerformanceFn fn, int n_component_states,
                             int n_system_states);

/// Nodes uniform in the unit square, edges between pairs within `radius`.
/// Retries disconnected placements a bounded number of times, then keeps
/// the largest connected component of the last attempt.
Graph random_geometric_graph(int n_nodes, double radius, std::uint64_t seed,
                             int max_attempts = 20);

/// Radius giving roughly `mean_degree` neighbours, ignoring boundary effects.
double radius_for_mean_degree(int n_nodes, double mean_degree);

/// Origin: highest degree. Destination: largest hop distance from it.
/// Ties go to the lowest node index.
std::pair<int, int> select_od_pair(const Graph& graph);

}  // namespace rsr
