#include "rsr/sampling.hpp"

#include "rsr/random.hpp"

namespace rsr {

IndependentSampler::IndependentSampler(const ComponentDistribution& dist)
    : cdf_(dist.n_components(), dist.n_states()) {
  for (int n = 0; n < dist.n_components(); ++n) {
    double acc = 0.0;
    for (int m = 0; m < dist.n_states(); ++m) {
      acc += dist.prob(n, m);
      cdf_(n, m) = acc;
    }
    cdf_(n, dist.n_states() - 1) = 1.0;
  }
}

State IndependentSampler::draw_component(std::uint64_t sample_key, int component) const {
  const double u = to_unit(stream_key(sample_key, static_cast<std::uint64_t>(component)));
  const auto row = cdf_.row(component);
  int m = 0;
  while (u >= row(m)) ++m;
  return static_cast<State>(m);
}

void IndependentSampler::fill(std::uint64_t seed, std::uint64_t generation,
                              std::int64_t first_index, Eigen::Ref<StateMatrix> out) const {
  if (out.cols() != cdf_.rows()) throw ModelError("sample buffer has the wrong component count");
  const std::uint64_t stream = stream_key(seed, generation);
  for (Eigen::Index h = 0; h < out.rows(); ++h) {
    const std::uint64_t key = stream_key(stream, static_cast<std::uint64_t>(first_index + h));
    for (Eigen::Index n = 0; n < out.cols(); ++n) out(h, n) = draw_component(key, static_cast<int>(n));
  }
}

StateVector IndependentSampler::draw(std::uint64_t seed, std::uint64_t generation,
                                     std::int64_t index) const {
  const std::uint64_t key = stream_key(stream_key(seed, generation), static_cast<std::uint64_t>(index));
  StateVector x(n_components());
  for (int n = 0; n < n_components(); ++n) x[n] = draw_component(key, n);
  return x;
}

SampleBatch sample_range(const ComponentDistribution& dist, std::uint64_t seed,
                         std::uint64_t generation_index, std::int64_t first_index,
                         std::int64_t count) {
  if (count < 0 || first_index < 0) throw ModelError("sample range must be non-negative");
  SampleBatch batch;
  batch.seed = seed;
  batch.generation_index = generation_index;
  batch.first_index = first_index;
  batch.vectors.resize(count, dist.n_components());
  IndependentSampler(dist).fill(seed, generation_index, first_index, batch.vectors);
  return batch;
}

SampleBatch sample_batch(const ComponentDistribution& dist, std::int64_t H, std::uint64_t seed,
                         std::uint64_t generation_index) {
  if (H < 1) throw ModelError("H must be at least 1");
  return sample_range(dist, seed, generation_index, 0, H);
}

}  // namespace rsr
