#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rsr/boundary.hpp"
#include "rsr/classify.hpp"
#include "rsr/model.hpp"

namespace rsr {

/// Stage 2 and crude Monte Carlo draw from generation 0; Stage-1
/// iteration i uses generation i + 1.
inline constexpr std::uint64_t kEvaluationGeneration = 0;

struct RunConfig {
  std::int64_t H = 1'000'000;
  /// Stage 1 stops once the unclassified fraction of the current batch is
  /// at most eps_u. This is a sample estimate, not a certified bound.
  double eps_u = 1e-5;
  std::int64_t r_max = 10'000;
  std::int64_t chunk_size = kDefaultChunkSize;
  std::uint64_t seed = 0;
  /// Boundary searches launched per Stage-1 iteration.
  int parallel_searches = 1;
  int workers = 1;
  /// When false, unclassified samples are inserted as references unchanged.
  bool boundary_search = true;

  void validate() const;
};

struct TraceRecord {
  std::int64_t reference_count = 0;
  double elapsed_seconds = 0.0;
  std::uint64_t phi_evaluations = 0;
  double p_unclassified = 0.0;
  double p_lower = 0.0;
  double p_upper = 0.0;
  std::optional<std::uint64_t> resident_memory_bytes;
};

struct Stage1Result {
  ReferenceSet lower;
  ReferenceSet upper;
  std::vector<TraceRecord> trace;
  std::int64_t iterations = 0;
  /// Search results already covered by an existing reference.
  std::int64_t redundant = 0;
  /// True if the run stopped on eps_u rather than r_max.
  bool converged = false;
};

struct Stage2Report {
  double p_lower = 0.0;
  double p_upper = 0.0;
  std::optional<double> cov_lower;
  std::optional<double> cov_upper;
  std::int64_t H = 0;
  std::int64_t classified_lower = 0;
  std::int64_t classified_upper = 0;
  /// Phi evaluations spent on samples no reference classified.
  std::int64_t unclassified_resolved = 0;
  int threshold = 0;
  std::uint64_t seed = 0;
};

Stage1Result stage1_find_references(const SystemModel& model, const ComponentDistribution& dist,
                                    const RunConfig& config, int threshold);

Stage2Report stage2_evaluate(const SystemModel& model, const ComponentDistribution& dist,
                             const ReferenceSet& lower, const ReferenceSet& upper,
                             const RunConfig& config, int threshold);

struct PmfAssembly {
  std::vector<double> pmf;
  /// Total negative mass clamped to zero before renormalising.
  double clamped = 0.0;
};

class PmfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P(S = m) from cumulative[m] = P(S <= m), m = 0..M_S-2. A decrease larger
/// than four standard errors (when H is given) or 1e-12 (otherwise) is an
/// error; smaller dips are clamped.
PmfAssembly assemble_pmf(const std::vector<double>& cumulative,
                         std::optional<std::int64_t> H = std::nullopt);

/// P(S = m) from upper_tail[m] = P(S >= m + 1), m = 0..M_S-2.
std::vector<double> pmf_from_upper_tail(const std::vector<double>& upper_tail);

struct PmfResult {
  std::vector<double> pmf;
  std::vector<double> cumulative;
  /// Largest |difference| between the lower-chain and upper-chain PMFs.
  double chain_discrepancy = 0.0;
  double clamped = 0.0;
  std::vector<Stage1Result> stage1;
  std::vector<Stage2Report> stage2;
};

/// Runs Stage 1 and Stage 2 for every threshold m' = 0..M_S-2.
PmfResult multistate_pmf(const SystemModel& model, const ComponentDistribution& dist,
                         const RunConfig& config);

/// Best-effort resident set size of this process.
std::optional<std::uint64_t> resident_memory_bytes();

}  // namespace rsr
