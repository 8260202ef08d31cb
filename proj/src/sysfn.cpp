#include "rsr/sysfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <string>

#include "rsr/random.hpp"

namespace rsr {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent_[a] = b;
      --components_;
    }
  }
  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  int components_;
};

void check_length(const Graph& g, StateView x) {
  if (static_cast<int>(x.size()) != g.n_edges())
    throw ModelError("state vector length " + std::to_string(x.size()) +
                     " does not match edge count " + std::to_string(g.n_edges()));
}

DisjointSets surviving_components(const Graph& g, StateView x) {
  DisjointSets ds(g.n_nodes);
  for (int e = 0; e < g.n_edges(); ++e)
    if (x[e] >= 1) ds.unite(g.edges[e].first, g.edges[e].second);
  return ds;
}

// Unit-capacity residual network; arc 2e and 2e+1 are the two directions
// of undirected edge e and act as each other's reverse.
class UnitFlowNetwork {
 public:
  UnitFlowNetwork(const Graph& g, StateView x) : adj_(g.n_nodes) {
    for (int e = 0; e < g.n_edges(); ++e) {
      if (x[e] < 1) continue;
      const auto [u, v] = g.edges[e];
      const int a = static_cast<int>(head_.size());
      head_.push_back(v);
      head_.push_back(u);
      adj_[u].push_back(a);
      adj_[v].push_back(a + 1);
    }
    cap_.assign(head_.size(), 1);
  }

  /// Max flow from s to t, stopping once `limit` is reached.
  int max_flow(int s, int t, int limit) {
    std::fill(cap_.begin(), cap_.end(), 1);
    std::vector<int> via(adj_.size());
    int flow = 0;
    while (flow < limit) {
      std::fill(via.begin(), via.end(), -1);
      std::queue<int> q;
      q.push(s);
      via[s] = -2;
      while (!q.empty() && via[t] == -1) {
        const int u = q.front();
        q.pop();
        for (int a : adj_[u]) {
          const int w = head_[a];
          if (cap_[a] > 0 && via[w] == -1) {
            via[w] = a;
            q.push(w);
          }
        }
      }
      if (via[t] == -1) break;
      for (int w = t; w != s;) {
        const int a = via[w];
        --cap_[a];
        ++cap_[a ^ 1];
        w = head_[a ^ 1];
      }
      ++flow;
    }
    return flow;
  }

 private:
  std::vector<std::vector<int>> adj_;
  std::vector<int> head_;
  std::vector<int> cap_;
};

}  // namespace

void Graph::validate() const {
  if (n_nodes < 1) throw ModelError("graph needs at least one node");
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes)
      throw ModelError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                       ") references a node outside [0, " + std::to_string(n_nodes - 1) + "]");
    if (u == v) throw ModelError("self-loop at node " + std::to_string(u));
  }
  if (!positions.empty() && static_cast<int>(positions.size()) != n_nodes)
    throw ModelError("positions must have one entry per node");
}

PerformanceFn single_od_connectivity(const Graph& graph, int origin, int destination) {
  graph.validate();
  if (origin < 0 || origin >= graph.n_nodes || destination < 0 || destination >= graph.n_nodes)
    throw ModelError("origin/destination node out of range");
  if (origin == destination) throw ModelError("origin and destination must differ");
  return [graph, origin, destination](StateView x) {
    check_length(graph, x);
    auto ds = surviving_components(graph, x);
    return ds.find(origin) == ds.find(destination) ? 1 : 0;
  };
}

PerformanceFn global_connectivity(const Graph& graph) {
  graph.validate();
  return [graph](StateView x) {
    check_length(graph, x);
    return surviving_components(graph, x).components() == 1 ? 1 : 0;
  };
}

PerformanceFn edge_disjoint_level(const Graph& graph, int max_level) {
  graph.validate();
  if (max_level < 1) throw ModelError("max_level must be at least 1");
  return [graph, max_level](StateView x) {
    check_length(graph, x);
    if (surviving_components(graph, x).components() != 1) return 0;
    if (max_level == 1 || graph.n_nodes == 1) return max_level;
    // Every cut separates node 0 from some t, so the all-pairs minimum
    // equals the minimum over pairs (0, t).
    UnitFlowNetwork net(graph, x);
    int level = max_level;
    for (int t = 1; t < graph.n_nodes && level > 1; ++t)
      level = std::min(level, net.max_flow(0, t, level));
    return level;
  };
}

PerformanceFn k_out_of_n(int k, int n_components) {
  if (k < 1 || k > n_components)
    throw ModelError("k must lie in [1, " + std::to_string(n_components) + "]");
  return [k, n_components](StateView x) {
    if (static_cast<int>(x.size()) != n_components) throw ModelError("state vector length mismatch");
    // The k-th largest state is the largest m reached by at least k components.
    StateVector sorted(x.begin(), x.end());
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end(), std::greater<>());
    return static_cast<int>(sorted[k - 1]);
  };
}

PerformanceFn generator_union(std::vector<std::vector<StateVector>> generators) {
  return [gens = std::move(generators)](StateView x) {
    for (int level = static_cast<int>(gens.size()); level >= 1; --level) {
      for (const auto& g : gens[level - 1]) {
        if (g.size() != x.size()) throw ModelError("generator length mismatch");
        bool covered = true;
        for (std::size_t n = 0; n < x.size() && covered; ++n) covered = x[n] >= g[n];
        if (covered) return level;
      }
    }
    return 0;
  };
}

SystemModel make_graph_model(const Graph& graph, PerformanceFn fn, int n_component_states,
                             int n_system_states) {
  if (graph.n_edges() < 1) throw ModelError("graph has no edges");
  return SystemModel(graph.n_edges(), n_component_states, n_system_states, std::move(fn));
}

Graph random_geometric_graph(int n_nodes, double radius, std::uint64_t seed, int max_attempts) {
  if (n_nodes < 2) throw ModelError("n_nodes must be at least 2");
  if (!(radius > 0.0 && radius <= 1.0)) throw ModelError("radius must lie in (0, 1]");
  if (max_attempts < 1) throw ModelError("max_attempts must be positive");

  const double r2 = radius * radius;
  Graph g;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t key = stream_key(seed, static_cast<std::uint64_t>(attempt));
    g = Graph{};
    g.n_nodes = n_nodes;
    g.positions.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      const auto k = stream_key(key, static_cast<std::uint64_t>(i));
      g.positions[i] = {to_unit(mix64(k)), to_unit(mix64(k + 1))};
    }
    for (int i = 0; i < n_nodes; ++i)
      for (int j = i + 1; j < n_nodes; ++j) {
        const double dx = g.positions[i].x - g.positions[j].x;
        const double dy = g.positions[i].y - g.positions[j].y;
        if (dx * dx + dy * dy <= r2) g.edges.emplace_back(i, j);
      }
    g.provenance = GraphProvenance{seed, radius, n_nodes, attempt + 1, false};
    const StateVector all_up(g.edges.size(), 1);
    if (surviving_components(g, all_up).components() == 1) return g;
  }

  // Keep the largest component of the last attempt, relabelled in index order.
  const StateVector all_up(g.edges.size(), 1);
  auto ds = surviving_components(g, all_up);
  std::vector<int> size(n_nodes, 0);
  for (int v = 0; v < n_nodes; ++v) ++size[ds.find(v)];
  const int root = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<int> relabel(n_nodes, -1);
  Graph lcc;
  for (int v = 0; v < n_nodes; ++v) {
    if (ds.find(v) != root) continue;
    relabel[v] = lcc.n_nodes++;
    lcc.positions.push_back(g.positions[v]);
  }
  for (const auto& [u, v] : g.edges)
    if (relabel[u] >= 0 && relabel[v] >= 0) lcc.edges.emplace_back(relabel[u], relabel[v]);
  lcc.provenance = g.provenance;
  lcc.provenance->largest_component_only = true;
  return lcc;
}

double radius_for_mean_degree(int n_nodes, double mean_degree) {
  if (n_nodes < 2) throw ModelError("n_nodes must be at least 2");
  return std::min(1.0, std::sqrt(mean_degree / ((n_nodes - 1) * std::numbers::pi)));
}

std::pair<int, int> select_od_pair(const Graph& graph) {
  graph.validate();
  if (graph.n_nodes < 2) throw ModelError("graph needs two nodes for an OD pair");
  std::vector<int> degree(graph.n_nodes, 0);
  std::vector<std::vector<int>> adj(graph.n_nodes);
  for (const auto& [u, v] : graph.edges) {
    ++degree[u];
    ++degree[v];
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  const int origin = static_cast<int>(std::max_element(degree.begin(), degree.end()) - degree.begin());
  std::vector<int> hops(graph.n_nodes, -1);
  std::queue<int> q;
  hops[origin] = 0;
  q.push(origin);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int w : adj[u])
      if (hops[w] < 0) {
        hops[w] = hops[u] + 1;
        q.push(w);
      }
  }
  int destination = origin == 0 ? 1 : 0;
  for (int v = 0; v < graph.n_nodes; ++v)
    if (v != origin && hops[v] > hops[destination]) destination = v;
  return {origin, destination};
}

}  // namespace rsr
