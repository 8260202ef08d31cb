#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsr/boundary.hpp"
#include "rsr/model.hpp"
#include "rsr/sysfn.hpp"

// Ground-truth engines for validation. Everything here is written with
// plain scalar loops and shares no code with the encoding and
// classification fast paths.
namespace rsr::oracle {

/// Largest enumeration the oracle accepts: M^N <= 2^24.
inline constexpr std::uint64_t kMaxEnumeration = std::uint64_t{1} << 24;

class TooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct ExactResult {
  /// cumulative[m] = P(S <= m), m = 0..M_S-1.
  std::vector<double> cumulative;
  /// Number of component-state vectors with Phi(x) = m.
  std::vector<std::uint64_t> state_count;

  std::vector<double> pmf() const;
};

ExactResult exact_probabilities(const SystemModel& model, const ComponentDistribution& dist);

/// a <= b componentwise.
bool dominates(StateView a, StateView b);

struct MonteCarloEstimate {
  double p_lower;  // P(S <= m')
  std::optional<double> cov;
  std::int64_t H;
  std::int64_t lower_count;
};

/// Evaluates Phi on H samples drawn from generation 0 of `seed`.
MonteCarloEstimate crude_monte_carlo(const SystemModel& model, const ComponentDistribution& dist,
                                     std::int64_t H, std::uint64_t seed, int threshold);

/// Probability that X is classified by some member of the set.
double exact_reference_probability(const ComponentDistribution& dist, Side side,
                                   const std::vector<StateVector>& members);

double exact_reference_probability(const ComponentDistribution& dist, const ReferenceSet& set);

/// Breadth-first search over surviving edges (state >= 1).
bool bfs_connected(const Graph& graph, StateView x, int origin, int destination);

}  // namespace rsr::oracle
