#include "rsr/oracle.hpp"

#include <queue>
#include <string>

#include "rsr/classify.hpp"
#include "rsr/sampling.hpp"

namespace rsr::oracle {

namespace {

std::uint64_t space_size(int n, int m) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(m);
    if (total > kMaxEnumeration)
      throw TooLarge("state space " + std::to_string(m) + "^" + std::to_string(n) +
                     " exceeds the 2^24 enumeration limit");
  }
  return total;
}

// Calls visit(x, P(x)) for every vector, component 0 varying fastest.
template <typename Visit>
void enumerate(const ComponentDistribution& dist, Visit&& visit) {
  const int n = dist.n_components();
  const int m = dist.n_states();
  const std::uint64_t total = space_size(n, m);
  StateVector x(n, 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    double p = 1.0;
    for (int c = 0; c < n; ++c) p *= dist.prob(c, x[c]);
    visit(x, p);
    for (int c = 0; c < n; ++c) {
      if (++x[c] < m) break;
      x[c] = 0;
    }
  }
}

}  // namespace

std::vector<double> ExactResult::pmf() const {
  std::vector<double> out(cumulative.size());
  for (std::size_t m = 0; m < cumulative.size(); ++m)
    out[m] = cumulative[m] - (m == 0 ? 0.0 : cumulative[m - 1]);
  return out;
}

ExactResult exact_probabilities(const SystemModel& model, const ComponentDistribution& dist) {
  dist.check_compatible(model);
  const int ms = model.n_system_states();
  std::vector<double> mass(ms, 0.0);
  ExactResult r;
  r.state_count.assign(ms, 0);
  enumerate(dist, [&](const StateVector& x, double p) {
    const int s = model.evaluate(x);
    mass[s] += p;
    ++r.state_count[s];
  });
  r.cumulative.resize(ms);
  double acc = 0.0;
  for (int s = 0; s < ms; ++s) r.cumulative[s] = (acc += mass[s]);
  // Absorb rounding so the chain ends at exactly 1.
  r.cumulative[ms - 1] = 1.0;
  return r;
}

bool dominates(StateView a, StateView b) {
  if (a.size() != b.size())
    throw ModelError("cannot compare vectors of length " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

MonteCarloEstimate crude_monte_carlo(const SystemModel& model, const ComponentDistribution& dist,
                                     std::int64_t H, std::uint64_t seed, int threshold) {
  if (H < 1) throw ModelError("H must be at least 1");
  dist.check_compatible(model);
  const IndependentSampler sampler(dist);
  std::int64_t count = 0;
  for (std::int64_t h = 0; h < H; ++h)
    if (model.evaluate(sampler.draw(seed, 0, h)) <= threshold) ++count;
  const double p = static_cast<double>(count) / static_cast<double>(H);
  return {p, cov(p, H), H, count};
}

double exact_reference_probability(const ComponentDistribution& dist, Side side,
                                   const std::vector<StateVector>& members) {
  double total = 0.0;
  enumerate(dist, [&](const StateVector& x, double p) {
    for (const auto& r : members) {
      if (side == Side::Lower ? dominates(x, r) : dominates(r, x)) {
        total += p;
        return;
      }
    }
  });
  return total;
}

double exact_reference_probability(const ComponentDistribution& dist, const ReferenceSet& set) {
  return exact_reference_probability(dist, set.side(), set.members());
}

bool bfs_connected(const Graph& graph, StateView x, int origin, int destination) {
  std::vector<std::vector<int>> adj(graph.n_nodes);
  for (int e = 0; e < graph.n_edges(); ++e) {
    if (x[e] < 1) continue;
    adj[graph.edges[e].first].push_back(graph.edges[e].second);
    adj[graph.edges[e].second].push_back(graph.edges[e].first);
  }
  std::vector<bool> seen(graph.n_nodes, false);
  std::queue<int> q;
  q.push(origin);
  seen[origin] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (u == destination) return true;
    for (int w : adj[u])
      if (!seen[w]) {
        seen[w] = true;
        q.push(w);
      }
  }
  return false;
}

}  // namespace rsr::oracle
