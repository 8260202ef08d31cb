#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "rsr/model.hpp"

namespace rsr {

/// Row-major H x N state matrix; row h is one component-state vector.
using StateMatrix = Eigen::Matrix<State, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A contiguous slice [first_index, first_index + size) of the sample
/// stream identified by (seed, generation_index).
struct SampleBatch {
  StateMatrix vectors;
  std::uint64_t seed = 0;
  std::uint64_t generation_index = 0;
  std::int64_t first_index = 0;

  std::int64_t size() const { return vectors.rows(); }
  int n_components() const { return static_cast<int>(vectors.cols()); }
  StateView row(std::int64_t h) const {
    return {vectors.data() + h * vectors.cols(), static_cast<std::size_t>(vectors.cols())};
  }
};

/// Inverse-CDF sampler over independent categorical components. Draw
/// (h, n) depends only on (seed, generation, h, n).
class IndependentSampler {
 public:
  explicit IndependentSampler(const ComponentDistribution& dist);

  int n_components() const { return static_cast<int>(cdf_.rows()); }

  void fill(std::uint64_t seed, std::uint64_t generation, std::int64_t first_index,
            Eigen::Ref<StateMatrix> out) const;

  /// Single draw, for regenerating a sample by index.
  StateVector draw(std::uint64_t seed, std::uint64_t generation, std::int64_t index) const;

 private:
  State draw_component(std::uint64_t sample_key, int component) const;

  // cdf_(n, m) = P(X_n <= m); the last column is forced to 1.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cdf_;
};

/// Samples [first_index, first_index + count) of the stream.
SampleBatch sample_range(const ComponentDistribution& dist, std::uint64_t seed,
                         std::uint64_t generation_index, std::int64_t first_index,
                         std::int64_t count);

/// The first H samples of the stream.
SampleBatch sample_batch(const ComponentDistribution& dist, std::int64_t H, std::uint64_t seed,
                         std::uint64_t generation_index);

}  // namespace rsr
