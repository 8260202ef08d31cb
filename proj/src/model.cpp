#include "rsr/model.hpp"

#include <cmath>

#include "rsr/random.hpp"

namespace rsr {

SystemModel::SystemModel(int n_components, int n_component_states, int n_system_states,
                         PerformanceFn performance)
    : n_components_(n_components),
      n_component_states_(n_component_states),
      n_system_states_(n_system_states),
      performance_(std::move(performance)),
      counter_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  if (n_components < 1) throw ModelError("n_components must be positive");
  if (n_component_states < 1 || n_component_states > 256)
    throw ModelError("n_component_states must lie in [1, 256]");
  if (n_system_states < 2) throw ModelError("n_system_states must be at least 2");
  if (!performance_) throw ModelError("performance function is empty");
}

void SystemModel::validate(StateView x) const {
  if (static_cast<int>(x.size()) != n_components_)
    throw ModelError("state vector has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(n_components_));
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (x[n] >= n_component_states_)
      throw ModelError("component " + std::to_string(n) + " has state " +
                       std::to_string(int{x[n]}) + " outside [0, " +
                       std::to_string(n_component_states_ - 1) + "]");
  }
}

int SystemModel::evaluate(StateView x) const {
  validate(x);
  counter_->fetch_add(1, std::memory_order_relaxed);
  const int s = performance_(x);
  if (s < 0 || s >= n_system_states_)
    throw std::runtime_error("performance function returned " + std::to_string(s) +
                             ", outside [0, " + std::to_string(n_system_states_ - 1) + "]");
  return s;
}

ComponentDistribution::ComponentDistribution(Table probs) : probs_(std::move(probs)) {
  if (probs_.rows() < 1 || probs_.cols() < 1) throw ModelError("distribution table is empty");
  for (Eigen::Index n = 0; n < probs_.rows(); ++n) {
    for (Eigen::Index m = 0; m < probs_.cols(); ++m) {
      const double p = probs_(n, m);
      if (!(p >= 0.0 && p <= 1.0))
        throw ModelError("probability of component " + std::to_string(n) + " state " +
                         std::to_string(m) + " is outside [0, 1]");
    }
    if (std::abs(probs_.row(n).sum() - 1.0) > 1e-12)
      throw ModelError("probabilities of component " + std::to_string(n) + " do not sum to 1");
  }
}

ComponentDistribution ComponentDistribution::identical(int n_components,
                                                       std::span<const double> row) {
  if (n_components < 1) throw ModelError("n_components must be positive");
  Table t(n_components, static_cast<Eigen::Index>(row.size()));
  for (int n = 0; n < n_components; ++n)
    for (std::size_t m = 0; m < row.size(); ++m) t(n, static_cast<Eigen::Index>(m)) = row[m];
  return ComponentDistribution(std::move(t));
}

void ComponentDistribution::check_compatible(const SystemModel& model) const {
  if (n_components() != model.n_components() || n_states() != model.n_component_states())
    throw ModelError("distribution is " + std::to_string(n_components()) + "x" +
                     std::to_string(n_states()) + " but the model has N=" +
                     std::to_string(model.n_components()) +
                     ", M=" + std::to_string(model.n_component_states()));
}

std::vector<CoherencyViolation> check_coherency(const SystemModel& model, int trials,
                                                std::uint64_t seed) {
  if (trials < 1) throw ModelError("trials must be at least 1");
  const int n = model.n_components();
  const auto m = static_cast<std::uint64_t>(model.n_component_states());
  std::vector<CoherencyViolation> out;
  StateVector hi(n), lo(n);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t key = stream_key(seed, static_cast<std::uint64_t>(t));
    for (int c = 0; c < n; ++c) {
      const std::uint64_t base = stream_key(key, static_cast<std::uint64_t>(c));
      hi[c] = static_cast<State>(to_range(mix64(base), m));
      // Degrade roughly half of the components to a uniform lower state.
      const bool degrade = (mix64(base + 1) >> 63) != 0;
      lo[c] = degrade ? static_cast<State>(to_range(mix64(base + 2), std::uint64_t{hi[c]} + 1))
                      : hi[c];
    }
    const int phi_lo = model.evaluate(lo);
    const int phi_hi = model.evaluate(hi);
    if (phi_lo > phi_hi) out.push_back({lo, hi, phi_lo, phi_hi});
  }
  return out;
}

}  // namespace rsr
