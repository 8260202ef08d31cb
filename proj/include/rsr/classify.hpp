#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rsr/boundary.hpp"
#include "rsr/encoding.hpp"
#include "rsr/sampling.hpp"

namespace rsr {

inline constexpr std::int64_t kDefaultChunkSize = 65'536;

/// H x R; entry (h, r) counts positions where sample h falls outside
/// reference r. Zero means r classifies h.
using ViolationMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Bit-packed violation product, popcount(h AND NOT r), one chunk of at
/// most `chunk_size` samples at a time.
ViolationMatrix violation_counts(const EncodedBatch& samples, const EncodedBatch& refs,
                                 std::int64_t chunk_size = kDefaultChunkSize, int workers = 1);

/// Streams the violation matrix chunk by chunk without materialising it.
/// `visit(first_row, block)` may run concurrently for distinct chunks.
void for_each_violation_chunk(
    const EncodedBatch& samples, const EncodedBatch& refs, std::int64_t chunk_size, int workers,
    const std::function<void(std::int64_t first_row, const ViolationMatrix& block)>& visit);

/// Unpacked route: integer matrix product H_flat * (1 - R_flat)^T.
template <typename Scalar>
ViolationMatrix violation_counts_dense(const BinaryMatrix<Scalar>& samples_flat,
                                       const BinaryMatrix<Scalar>& refs_flat) {
  using IntMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (samples_flat.cols() != refs_flat.cols())
    throw EncodingError("sample and reference widths differ");
  const IntMatrix h = samples_flat.template cast<std::int32_t>();
  const IntMatrix r_bar = (1 - refs_flat.template cast<std::int32_t>().array()).matrix();
  return h * r_bar.transpose();
}

/// sqrt((1 - p) / (H p)); nullopt when p_hat == 0.
std::optional<double> cov(double p_hat, std::int64_t H);

struct ClassifyOptions {
  std::int64_t chunk_size = kDefaultChunkSize;
  int workers = 1;
  /// Throw if a sample matches both a lower and an upper reference.
  bool strict = false;
  /// Fill ClassificationResult::first_match.
  bool record_matches = false;
  /// Stop scanning references at the first zero-violation hit.
  bool early_exit = true;
};

class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partition of sample indices into lower, upper and unclassified.
/// Indices are absolute positions in the sample stream, kept ascending.
struct ClassificationResult {
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
  std::vector<std::int64_t> unclassified;
  std::int64_t H = 0;
  /// Per-sample index of the first matching reference within its set,
  /// -1 if unclassified. Only filled with record_matches.
  std::vector<std::int32_t> first_match;

  double p_lower() const { return fraction(lower.size()); }
  double p_upper() const { return fraction(upper.size()); }
  double p_unclassified() const { return fraction(unclassified.size()); }
  std::optional<double> cov_lower() const { return cov(p_lower(), H); }
  std::optional<double> cov_upper() const { return cov(p_upper(), H); }

  /// Unions another disjoint partition into this one.
  void merge(const ClassificationResult& other);

  friend bool operator==(const ClassificationResult&, const ClassificationResult&) = default;

 private:
  double fraction(std::size_t count) const {
    return H == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(H);
  }
};

struct ProbabilityEstimates {
  double p_lower;
  double p_upper;
  double p_unclassified;
};

/// |I| / H for each index set.
ProbabilityEstimates estimates_from_counts(std::int64_t n_lower, std::int64_t n_upper,
                                           std::int64_t n_unclassified);

/// Lower takes precedence over upper for samples matching both.
ClassificationResult classify(const SampleBatch& samples, const ReferenceSet& lower_set,
                              const ReferenceSet& upper_set, int n_states,
                              const ClassifyOptions& options = {});

}  // namespace rsr
