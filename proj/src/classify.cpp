#include "rsr/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>
#include <string>

#include "rsr/parallel.hpp"

namespace rsr {

namespace {

void check_pair(const EncodedBatch& samples, const EncodedBatch& refs) {
  if (samples.kind() != EncodingKind::Sample) throw EncodingError("left operand must be a sample batch");
  if (refs.kind() == EncodingKind::Sample) throw EncodingError("right operand must be a reference batch");
  if (samples.n_components() != refs.n_components() || samples.n_states() != refs.n_states())
    throw EncodingError("sample batch is " + std::to_string(samples.n_components()) + "x" +
                        std::to_string(samples.n_states()) + " but references are " +
                        std::to_string(refs.n_components()) + "x" + std::to_string(refs.n_states()));
  if (refs.rows() == 0) throw EncodingError("reference batch is empty");
}

std::int64_t chunk_count(std::int64_t rows, std::int64_t chunk_size) {
  if (chunk_size < 1) throw std::invalid_argument("chunk_size must be positive");
  return (rows + chunk_size - 1) / chunk_size;
}

inline std::int32_t violations(const std::uint64_t* h, const std::uint64_t* r_bar, int words) {
  std::int32_t count = 0;
  for (int w = 0; w < words; ++w) count += std::popcount(h[w] & r_bar[w]);
  return count;
}

inline bool no_violation(const std::uint64_t* h, const std::uint64_t* r_bar, int words) {
  for (int w = 0; w < words; ++w)
    if (h[w] & r_bar[w]) return false;
  return true;
}

// Complemented, packed reference rows ready for the violation product.
struct PackedRefs {
  std::vector<std::uint64_t> words;
  std::int64_t rows = 0;
};

PackedRefs pack(const ReferenceSet& set, EncodingKind kind, int n_components, int n_states) {
  const auto enc = EncodedBatch::from_vectors(kind, set.members(), n_components, n_states);
  return {enc.complement_words(), enc.rows()};
}

// First reference with zero violations, or -1.
std::int32_t first_match(const std::uint64_t* h, const PackedRefs& refs, int words, bool early_exit) {
  std::int32_t hit = -1;
  for (std::int64_t r = 0; r < refs.rows; ++r) {
    const std::uint64_t* rb = refs.words.data() + r * words;
    if (early_exit) {
      if (no_violation(h, rb, words)) return static_cast<std::int32_t>(r);
    } else if (violations(h, rb, words) == 0 && hit < 0) {
      hit = static_cast<std::int32_t>(r);
    }
  }
  return hit;
}

}  // namespace

void for_each_violation_chunk(
    const EncodedBatch& samples, const EncodedBatch& refs, std::int64_t chunk_size, int workers,
    const std::function<void(std::int64_t, const ViolationMatrix&)>& visit) {
  check_pair(samples, refs);
  const auto r_bar = refs.complement_words();
  const int words = samples.words_per_row();
  const std::int64_t R = refs.rows();
  parallel_for(chunk_count(samples.rows(), chunk_size), workers, [&](std::int64_t c) {
    const std::int64_t first = c * chunk_size;
    const std::int64_t rows = std::min(chunk_size, samples.rows() - first);
    ViolationMatrix block(rows, R);
    for (std::int64_t h = 0; h < rows; ++h) {
      const std::uint64_t* hw = samples.row_words(first + h).data();
      for (std::int64_t r = 0; r < R; ++r) block(h, r) = violations(hw, r_bar.data() + r * words, words);
    }
    visit(first, block);
  });
}

ViolationMatrix violation_counts(const EncodedBatch& samples, const EncodedBatch& refs,
                                 std::int64_t chunk_size, int workers) {
  check_pair(samples, refs);
  ViolationMatrix out(samples.rows(), refs.rows());
  for_each_violation_chunk(samples, refs, chunk_size, workers,
                           [&out](std::int64_t first, const ViolationMatrix& block) {
                             out.middleRows(first, block.rows()) = block;
                           });
  return out;
}

std::optional<double> cov(double p_hat, std::int64_t H) {
  if (H < 1) throw std::invalid_argument("H must be positive");
  if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw std::invalid_argument("p_hat must lie in [0, 1]");
  if (p_hat == 0.0) return std::nullopt;
  return std::sqrt((1.0 - p_hat) / (static_cast<double>(H) * p_hat));
}

void ClassificationResult::merge(const ClassificationResult& other) {
  auto union_into = [](std::vector<std::int64_t>& into, const std::vector<std::int64_t>& from) {
    std::vector<std::int64_t> merged;
    merged.reserve(into.size() + from.size());
    std::merge(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(merged));
    into = std::move(merged);
  };
  union_into(lower, other.lower);
  union_into(upper, other.upper);
  union_into(unclassified, other.unclassified);
  H += other.H;
  // Match records are positional and only meaningful for a single batch.
  first_match.clear();
}

ProbabilityEstimates estimates_from_counts(std::int64_t n_lower, std::int64_t n_upper,
                                           std::int64_t n_unclassified) {
  if (n_lower < 0 || n_upper < 0 || n_unclassified < 0)
    throw std::invalid_argument("counts must be non-negative");
  const auto H = static_cast<double>(n_lower + n_upper + n_unclassified);
  if (H == 0) throw std::invalid_argument("at least one sample is required");
  return {static_cast<double>(n_lower) / H, static_cast<double>(n_upper) / H,
          static_cast<double>(n_unclassified) / H};
}

ClassificationResult classify(const SampleBatch& samples, const ReferenceSet& lower_set,
                              const ReferenceSet& upper_set, int n_states,
                              const ClassifyOptions& options) {
  if (lower_set.side() != Side::Lower || upper_set.side() != Side::Upper)
    throw ClassificationError("reference sets are passed as (lower, upper)");
  if (lower_set.threshold() != upper_set.threshold())
    throw ClassificationError("lower set threshold " + std::to_string(lower_set.threshold()) +
                              " differs from upper set threshold " +
                              std::to_string(upper_set.threshold()));
  const int N = samples.n_components();
  for (const ReferenceSet* set : {&lower_set, &upper_set})
    for (const auto& m : set->members())
      if (static_cast<int>(m.size()) != N)
        throw ClassificationError("reference length does not match the samples");

  const PackedRefs lower = pack(lower_set, EncodingKind::LowerRef, N, n_states);
  const PackedRefs upper = pack(upper_set, EncodingKind::UpperRef, N, n_states);
  const int words = (N * n_states + 63) / 64;
  const std::int64_t H = samples.size();
  const std::int64_t chunks = chunk_count(H, options.chunk_size);

  struct Part {
    std::vector<std::int64_t> lower, upper, unclassified;
    std::vector<std::int32_t> matches;
  };
  std::vector<Part> parts(static_cast<std::size_t>(chunks));

  parallel_for(chunks, options.workers, [&](std::int64_t c) {
    const std::int64_t first = c * options.chunk_size;
    const std::int64_t rows = std::min(options.chunk_size, H - first);
    EncodedBatch enc(EncodingKind::Sample, N, n_states);
    enc.reserve(rows);
    for (std::int64_t h = 0; h < rows; ++h) enc.append(samples.row(first + h));

    Part& part = parts[static_cast<std::size_t>(c)];
    if (options.record_matches) part.matches.resize(static_cast<std::size_t>(rows), -1);
    for (std::int64_t h = 0; h < rows; ++h) {
      const std::uint64_t* hw = enc.row_words(h).data();
      const std::int64_t index = samples.first_index + first + h;
      std::int32_t hit = first_match(hw, lower, words, options.early_exit);
      if (hit >= 0) {
        if (options.strict && first_match(hw, upper, words, true) >= 0)
          throw ClassificationError("sample " + std::to_string(index) +
                                    " matches both a lower and an upper reference");
        part.lower.push_back(index);
      } else if ((hit = first_match(hw, upper, words, options.early_exit)) >= 0) {
        part.upper.push_back(index);
      } else {
        part.unclassified.push_back(index);
      }
      if (options.record_matches) part.matches[static_cast<std::size_t>(h)] = hit;
    }
  });

  ClassificationResult result;
  result.H = H;
  for (auto& p : parts) {
    result.lower.insert(result.lower.end(), p.lower.begin(), p.lower.end());
    result.upper.insert(result.upper.end(), p.upper.begin(), p.upper.end());
    result.unclassified.insert(result.unclassified.end(), p.unclassified.begin(), p.unclassified.end());
    result.first_match.insert(result.first_match.end(), p.matches.begin(), p.matches.end());
  }
  return result;
}

}  // namespace rsr
