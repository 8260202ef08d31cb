#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rsr/model.hpp"
#include "rsr/sysfn.hpp"

namespace rsr::test {

/// Two components with five states; Phi = 1 iff x dominates one of
/// (1,4), (4,0), (3,2). Consistent with the worked boundary-search example.
inline SystemModel three_generator_model() {
  return SystemModel(2, 5, 2, generator_union({{{1, 4}, {4, 0}, {3, 2}}}));
}

inline Graph path_graph(int n_nodes) {
  Graph g;
  g.n_nodes = n_nodes;
  for (int i = 0; i + 1 < n_nodes; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

inline Graph triangle() {
  Graph g;
  g.n_nodes = 3;
  g.edges = {{0, 1}, {1, 2}, {0, 2}};
  return g;
}

/// Four-node cycle with one chord.
inline Graph diamond() {
  Graph g;
  g.n_nodes = 4;
  g.edges = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
  return g;
}

inline StateVector random_vector(std::mt19937_64& rng, int n, int m) {
  std::uniform_int_distribution<int> d(0, m - 1);
  StateVector x(n);
  for (auto& s : x) s = static_cast<State>(d(rng));
  return x;
}

struct RandomSystem {
  SystemModel model;
  ComponentDistribution dist;
};

/// Random coherent system: each level l has a handful of random generator
/// vectors and Phi(x) is the highest level whose generators x dominates.
/// Component distributions are random with every state at least 5% likely.
inline RandomSystem random_coherent_system(std::mt19937_64& rng, int n, int m, int n_system_states) {
  std::vector<std::vector<StateVector>> levels(n_system_states - 1);
  std::uniform_int_distribution<int> count(1, 4);
  for (auto& level : levels) {
    const int k = count(rng);
    for (int i = 0; i < k; ++i) level.push_back(random_vector(rng, n, m));
  }
  ComponentDistribution::Table t(n, m);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int c = 0; c < n; ++c) {
    double total = 0.0;
    for (int s = 0; s < m; ++s) total += (t(c, s) = u(rng));
    t.row(c) /= total;
    // Re-normalise to guarantee the 1e-12 row-sum tolerance.
    t(c, m - 1) = 1.0 - t.row(c).head(m - 1).sum();
  }
  return {SystemModel(n, m, n_system_states, generator_union(std::move(levels))),
          ComponentDistribution(std::move(t))};
}

}  // namespace rsr::test
