#include "rsr/workflow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <string>
#include <unistd.h>

#include "rsr/parallel.hpp"
#include "rsr/random.hpp"
#include "rsr/sampling.hpp"

namespace rsr {

namespace {

// Distinguishes seed selection draws from sample draws of the same run.
constexpr std::uint64_t kSelectionStream = 0x73656c656374ULL;

void check_threshold(const SystemModel& model, int threshold) {
  if (threshold < 0 || threshold > model.n_system_states() - 2)
    throw ModelError("threshold " + std::to_string(threshold) + " outside [0, " +
                     std::to_string(model.n_system_states() - 2) + "]");
}

// Uniform selection of `count` distinct entries by partial Fisher-Yates.
std::vector<std::int64_t> pick_seeds(std::vector<std::int64_t> pool, std::size_t count,
                                     std::uint64_t key) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto remaining = static_cast<std::uint64_t>(pool.size() - i);
    const std::size_t j = i + static_cast<std::size_t>(to_range(stream_key(key, i), remaining));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

ClassifyOptions classify_options(const RunConfig& config) {
  ClassifyOptions opts;
  opts.chunk_size = config.chunk_size;
  opts.workers = config.workers;
  return opts;
}

}  // namespace

void RunConfig::validate() const {
  if (H < 1) throw ModelError("H must be at least 1");
  if (!(eps_u >= 0.0 && eps_u <= 1.0)) throw ModelError("eps_u must lie in [0, 1]");
  if (r_max < 1) throw ModelError("r_max must be at least 1");
  if (chunk_size < 1) throw ModelError("chunk_size must be positive");
  if (parallel_searches < 1) throw ModelError("parallel_searches must be at least 1");
  if (workers < 1) throw ModelError("workers must be at least 1");
}

Stage1Result stage1_find_references(const SystemModel& model, const ComponentDistribution& dist,
                                    const RunConfig& config, int threshold) {
  config.validate();
  check_threshold(model, threshold);
  dist.check_compatible(model);

  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t evals_at_start = model.evaluations();
  const int M = model.n_component_states();
  Stage1Result out{ReferenceSet(Side::Lower, threshold), ReferenceSet(Side::Upper, threshold), {}, 0, 0,
                   false};

  for (std::int64_t iteration = 0;; ++iteration) {
    const auto generation = static_cast<std::uint64_t>(iteration) + 1;
    const SampleBatch batch = sample_batch(dist, config.H, config.seed, generation);
    const ClassificationResult cls = classify(batch, out.lower, out.upper, M, classify_options(config));

    const auto refs = static_cast<std::int64_t>(out.lower.size() + out.upper.size());
    TraceRecord rec;
    rec.reference_count = refs;
    rec.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.phi_evaluations = model.evaluations() - evals_at_start;
    rec.p_lower = cls.p_lower();
    rec.p_upper = cls.p_upper();
    rec.p_unclassified = cls.p_unclassified();
    rec.resident_memory_bytes = resident_memory_bytes();
    out.trace.push_back(rec);
    out.iterations = iteration + 1;

    if (cls.p_unclassified() <= config.eps_u) {
      out.converged = true;
      break;
    }
    if (refs >= config.r_max) break;

    const auto budget = static_cast<std::size_t>(
        std::min<std::int64_t>(config.parallel_searches, config.r_max - refs));
    const auto seeds = pick_seeds(cls.unclassified, budget,
                                  stream_key(config.seed, kSelectionStream, generation));
    std::vector<BoundarySearchResult> found(seeds.size());
    try {
      parallel_for(static_cast<std::int64_t>(seeds.size()), config.workers, [&](std::int64_t i) {
        const StateView x0 = batch.row(seeds[static_cast<std::size_t>(i)]);
        found[static_cast<std::size_t>(i)] = config.boundary_search ? boundary_search(model, x0, threshold)
                                                                    : raw_reference(model, x0, threshold);
      });
    } catch (const std::exception& e) {
      throw std::runtime_error("stage 1 iteration " + std::to_string(iteration) + ": " + e.what());
    }
    for (const auto& f : found) {
      ReferenceSet& set = f.reference.side == Side::Lower ? out.lower : out.upper;
      if (set.insert(f.reference, iteration) == InsertOutcome::Redundant) ++out.redundant;
    }
  }
  return out;
}

Stage2Report stage2_evaluate(const SystemModel& model, const ComponentDistribution& dist,
                             const ReferenceSet& lower, const ReferenceSet& upper,
                             const RunConfig& config, int threshold) {
  config.validate();
  check_threshold(model, threshold);
  dist.check_compatible(model);
  if (lower.threshold() != threshold || upper.threshold() != threshold)
    throw ClassificationError("reference sets were built for a different threshold");

  const SampleBatch batch = sample_batch(dist, config.H, config.seed, kEvaluationGeneration);
  const ClassificationResult cls =
      classify(batch, lower, upper, model.n_component_states(), classify_options(config));

  const auto& pending = cls.unclassified;
  std::vector<std::uint8_t> is_lower(pending.size(), 0);
  try {
    parallel_for(static_cast<std::int64_t>(pending.size()), config.workers, [&](std::int64_t i) {
      const auto k = static_cast<std::size_t>(i);
      is_lower[k] = model.evaluate(batch.row(pending[k])) <= threshold ? 1 : 0;
    });
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("stage 2: ") + e.what());
  }
  const auto resolved_lower = static_cast<std::int64_t>(std::count(is_lower.begin(), is_lower.end(), 1));

  Stage2Report rep;
  rep.H = config.H;
  rep.threshold = threshold;
  rep.seed = config.seed;
  rep.classified_lower = static_cast<std::int64_t>(cls.lower.size());
  rep.classified_upper = static_cast<std::int64_t>(cls.upper.size());
  rep.unclassified_resolved = static_cast<std::int64_t>(pending.size());
  const std::int64_t n_lower = rep.classified_lower + resolved_lower;
  rep.p_lower = static_cast<double>(n_lower) / static_cast<double>(config.H);
  rep.p_upper = static_cast<double>(config.H - n_lower) / static_cast<double>(config.H);
  rep.cov_lower = cov(rep.p_lower, config.H);
  rep.cov_upper = cov(rep.p_upper, config.H);
  return rep;
}

PmfAssembly assemble_pmf(const std::vector<double>& cumulative, std::optional<std::int64_t> H) {
  if (cumulative.empty()) throw PmfError("need at least one cumulative probability");
  const std::size_t ms = cumulative.size() + 1;
  for (double c : cumulative)
    if (!(c >= 0.0 && c <= 1.0)) throw PmfError("cumulative probabilities must lie in [0, 1]");

  auto sigma = [&](double p) {
    return H ? std::sqrt(p * (1.0 - p) / static_cast<double>(*H)) : 0.0;
  };
  PmfAssembly out;
  out.pmf.resize(ms);
  double prev = 0.0;
  for (std::size_t m = 0; m < ms; ++m) {
    const double cur = m + 1 < ms ? cumulative[m] : 1.0;
    double p = cur - prev;
    if (p < 0.0) {
      const double tol = H ? 4.0 * std::hypot(sigma(cur), sigma(prev)) : 1e-12;
      if (-p > tol)
        throw PmfError("P(S <= " + std::to_string(m) + ") is below P(S <= " + std::to_string(m - 1) +
                       ") beyond sampling tolerance; increase H");
      out.clamped += -p;
      p = 0.0;
    }
    out.pmf[m] = p;
    prev = cur;
  }
  if (out.clamped > 0.0) {
    double total = 0.0;
    for (double p : out.pmf) total += p;
    for (double& p : out.pmf) p /= total;
  }
  return out;
}

std::vector<double> pmf_from_upper_tail(const std::vector<double>& upper_tail) {
  const std::size_t ms = upper_tail.size() + 1;
  std::vector<double> out(ms);
  for (std::size_t m = 0; m < ms; ++m) {
    const double at_least_m = m == 0 ? 1.0 : upper_tail[m - 1];
    const double above = m + 1 < ms ? upper_tail[m] : 0.0;
    out[m] = at_least_m - above;
  }
  return out;
}

PmfResult multistate_pmf(const SystemModel& model, const ComponentDistribution& dist,
                         const RunConfig& config) {
  PmfResult out;
  std::vector<double> upper_tail;
  for (int t = 0; t <= model.n_system_states() - 2; ++t) {
    auto s1 = stage1_find_references(model, dist, config, t);
    auto s2 = stage2_evaluate(model, dist, s1.lower, s1.upper, config, t);
    out.cumulative.push_back(s2.p_lower);
    upper_tail.push_back(s2.p_upper);
    out.stage1.push_back(std::move(s1));
    out.stage2.push_back(s2);
  }
  auto assembled = assemble_pmf(out.cumulative, config.H);
  out.pmf = std::move(assembled.pmf);
  out.clamped = assembled.clamped;
  const auto upper_chain = pmf_from_upper_tail(upper_tail);
  for (std::size_t m = 0; m < out.pmf.size(); ++m)
    out.chain_discrepancy = std::max(out.chain_discrepancy, std::abs(out.pmf[m] - upper_chain[m]));
  return out;
}

std::optional<std::uint64_t> resident_memory_bytes() {
  std::ifstream statm("/proc/self/statm");
  std::uint64_t total_pages = 0, resident_pages = 0;
  if (!(statm >> total_pages >> resident_pages)) return std::nullopt;
  const long page = sysconf(_SC_PAGESIZE);
  if (page <= 0) return std::nullopt;
  return resident_pages * static_cast<std::uint64_t>(page);
}

}  // namespace rsr
