#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rsr {

/// A single component state index. Models are limited to M <= 256.
using State = std::uint8_t;

/// Assignment of one state to each of the N components.
using StateVector = std::vector<State>;

using StateView = std::span<const State>;

/// Maps a component-state vector to a system state in [0, M_S - 1].
using PerformanceFn = std::function<int(StateView)>;

/// Thrown on malformed arguments to model-level operations.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coherent multi-state system: N components with M states each, M_S
/// system states and a performance function.
///
/// Copies share the evaluation counter, so cost reporting stays uniform
/// when a model is handed to workers by value.
class SystemModel {
 public:
  SystemModel(int n_components, int n_component_states, int n_system_states,
              PerformanceFn performance);

  int n_components() const { return n_components_; }
  int n_component_states() const { return n_component_states_; }
  int n_system_states() const { return n_system_states_; }

  /// Validates `x` and dispatches to the performance function. Thread safe.
  int evaluate(StateView x) const;

  /// Throws ModelError unless `x` has length N with entries below M.
  void validate(StateView x) const;

  std::uint64_t evaluations() const { return counter_->load(std::memory_order_relaxed); }
  void reset_evaluations() const { counter_->store(0, std::memory_order_relaxed); }

 private:
  int n_components_;
  int n_component_states_;
  int n_system_states_;
  PerformanceFn performance_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

/// Independent categorical distribution per component: row n holds
/// P(X_n = m) for m = 0..M-1.
class ComponentDistribution {
 public:
  using Table = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  explicit ComponentDistribution(Table probs);

  /// Every component shares the same row.
  static ComponentDistribution identical(int n_components, std::span<const double> row);

  int n_components() const { return static_cast<int>(probs_.rows()); }
  int n_states() const { return static_cast<int>(probs_.cols()); }
  const Table& probs() const { return probs_; }
  double prob(int component, int state) const { return probs_(component, state); }

  /// Throws ModelError if the shape does not match the model.
  void check_compatible(const SystemModel& model) const;

 private:
  Table probs_;
};

/// A pair (lower, upper) with lower <= upper componentwise but
/// Phi(lower) > Phi(upper).
struct CoherencyViolation {
  StateVector lower;
  StateVector upper;
  int phi_lower;
  int phi_upper;
};

/// Randomized monotonicity spot check over `trials` ordered pairs.
std::vector<CoherencyViolation> check_coherency(const SystemModel& model, int trials,
                                                std::uint64_t seed);

}  // namespace rsr
