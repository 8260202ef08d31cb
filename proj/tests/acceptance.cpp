// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rsr/boundary.hpp"
#include "rsr/classify.hpp"
#include "rsr/encoding.hpp"
#include "rsr/oracle.hpp"
#include "rsr/sampling.hpp"
#include "rsr/sysfn.hpp"
#include "rsr/workflow.hpp"
#include "test_support.hpp"

namespace {

using namespace rsr;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Mat = BinaryMatrix<std::uint8_t>;

Mat rows(std::initializer_list<std::initializer_list<int>> data) {
  Mat m(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : data) {
    Eigen::Index c = 0;
    for (int v : row) m(r, c++) = static_cast<std::uint8_t>(v);
    ++r;
  }
  return m;
}

Outcome encoding_fidelity() {
  const bool ok = encode_lower_ref(StateVector{1, 2}, 5) == rows({{1, 1, 0, 0, 0}, {1, 1, 1, 0, 0}}) &&
                  encode_upper_ref(StateVector{1, 4}, 5) == rows({{0, 1, 1, 1, 1}, {0, 0, 0, 0, 1}}) &&
                  encode_upper_ref(StateVector{4, 0}, 5) == rows({{0, 0, 0, 0, 1}, {1, 1, 1, 1, 1}}) &&
                  encode_sample(StateVector{3, 0}, 5) == rows({{0, 0, 0, 1, 0}, {1, 0, 0, 0, 0}}) &&
                  encode_sample(StateVector{4, 4}, 5) == rows({{0, 0, 0, 0, 1}, {0, 0, 0, 0, 1}});
  return {ok, "five worked-example matrices"};
}

Outcome classification_counting() {
  const auto e = estimates_from_counts(3, 4, 3);
  bool ok = e.p_lower == 0.3 && e.p_upper == 0.4 && e.p_unclassified == 0.3;

  // The same partition produced end to end from ten samples.
  ReferenceSet lower(Side::Lower, 0), upper(Side::Upper, 0);
  lower.insert({{1, 2}, Side::Lower, 0});
  upper.insert({{1, 4}, Side::Upper, 0});
  upper.insert({{4, 0}, Side::Upper, 0});
  const std::vector<StateVector> xs{{0, 0}, {1, 1}, {0, 2}, {4, 4}, {1, 4},
                                    {4, 1}, {2, 4}, {3, 0}, {2, 0}, {3, 2}};
  SampleBatch b;
  b.vectors.resize(10, 2);
  for (int h = 0; h < 10; ++h)
    for (int n = 0; n < 2; ++n) b.vectors(h, n) = xs[static_cast<std::size_t>(h)][static_cast<std::size_t>(n)];
  const auto r = classify(b, lower, upper, 5);
  ok = ok && r.p_lower() == 0.3 && r.p_upper() == 0.4 && r.p_unclassified() == 0.3;
  return {ok, fmt("(%.1f, %.1f, %.1f) from counts and from classify", e.p_lower, e.p_upper, e.p_unclassified)};
}

Outcome boundary_trajectory() {
  const auto model = test::three_generator_model();
  const auto a = boundary_search(model, StateVector{2, 0}, 0);
  const auto b = boundary_search(model, StateVector{4, 4}, 0);
  const bool ok = a.reference.vector == StateVector{3, 1} && a.reference.side == Side::Lower &&
                  a.evaluations <= 9 && b.reference.vector == StateVector{1, 4} &&
                  b.reference.side == Side::Upper;
  return {ok, fmt("(2,0) -> lower (%d,%d) in %d evals; (4,4) -> %s (%d,%d)", a.reference.vector[0],
                  a.reference.vector[1], a.evaluations, to_string(b.reference.side), b.reference.vector[0],
                  b.reference.vector[1])};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  RunConfig config;
  config.H = 100'000;
  config.eps_u = 1e-5;
  config.r_max = 200;
  int systems = 0, comparisons = 0, failures = 0;
  double worst_z = 0.0;
  for (int s = 0; s < 60; ++s) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int m = 2 + static_cast<int>(rng() % 2);
    const int ms = 2 + static_cast<int>(rng() % 2);
    auto sys = test::random_coherent_system(rng, n, m, ms);
    config.seed = rng();
    const auto exact = oracle::exact_probabilities(sys.model, sys.dist);
    for (int t = 0; t + 1 < ms; ++t) {
      const auto s1 = stage1_find_references(sys.model, sys.dist, config, t);
      const auto s2 = stage2_evaluate(sys.model, sys.dist, s1.lower, s1.upper, config, t);
      const double p = s2.p_lower;
      const double H = static_cast<double>(config.H);
      // delta * p with delta from the estimated CoV; 1/H once p hits 0 or 1.
      const double sigma = std::max(std::sqrt(p * (1 - p) / H), 1.0 / H);
      const double z = std::abs(p - exact.cumulative[static_cast<std::size_t>(t)]) / sigma;
      worst_z = std::max(worst_z, z);
      ++comparisons;
      if (z > 4.0) ++failures;
    }
    ++systems;
  }
  return {failures == 0 && systems >= 50,
          fmt("%d systems, %d thresholds, %d outside 4 sigma, worst %.2f sigma, %.1f s", systems, comparisons,
              failures, worst_z, seconds_since(t0))};
}

Outcome violation_equivalence() {
  std::mt19937_64 rng(5);
  int mismatches = 0;
  const int pairs = 100'000;
  for (int i = 0; i < pairs; ++i) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int m = 1 + static_cast<int>(rng() % 5);
    const auto x = test::random_vector(rng, n, m);
    const auto r = test::random_vector(rng, n, m);
    const auto h = EncodedBatch::from_vectors(EncodingKind::Sample, std::vector<StateVector>{x}, n, m);
    const auto lo = EncodedBatch::from_vectors(EncodingKind::LowerRef, std::vector<StateVector>{r}, n, m);
    const auto up = EncodedBatch::from_vectors(EncodingKind::UpperRef, std::vector<StateVector>{r}, n, m);
    const auto v_lo = violation_counts(h, lo)(0, 0);
    const auto v_up = violation_counts(h, up)(0, 0);
    const auto d_lo = violation_counts_dense(h.to_dense<std::int32_t>(), lo.to_dense<std::int32_t>())(0, 0);
    const auto d_up = violation_counts_dense(h.to_dense<std::int32_t>(), up.to_dense<std::int32_t>())(0, 0);
    if ((v_lo == 0) != oracle::dominates(x, r) || (v_up == 0) != oracle::dominates(r, x) || v_lo != d_lo ||
        v_up != d_up)
      ++mismatches;
  }
  return {mismatches == 0, fmt("%d pairs, %d mismatches", pairs, mismatches)};
}

Outcome chunk_parallel_invariance() {
  std::mt19937_64 rng(6);
  const int n = 12, m = 3;
  auto sys = test::random_coherent_system(rng, n, m, 3);
  const std::int64_t H = 5000;
  const auto batch = sample_batch(sys.dist, H, 77, 0);
  ReferenceSet lower(Side::Lower, 1), upper(Side::Upper, 1);
  for (int i = 0; i < 30; ++i) {
    const auto r = boundary_search(sys.model, batch.row(i), 1);
    (r.reference.side == Side::Lower ? lower : upper).insert(r.reference);
  }
  const auto base = classify(batch, lower, upper, m);
  int variants = 0, differing = 0;
  for (std::int64_t chunk : {std::int64_t{1}, std::int64_t{7}, H, H + 13})
    for (int workers : {1, 4}) {
      ClassifyOptions o;
      o.chunk_size = chunk;
      o.workers = workers;
      ++variants;
      if (!(classify(batch, lower, upper, m, o) == base)) ++differing;
    }

  RunConfig config;
  config.H = 20'000;
  config.eps_u = 1e-4;
  config.r_max = 60;
  config.seed = 99;
  auto sorted = [](std::vector<StateVector> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto a = stage1_find_references(sys.model, sys.dist, config, 0);
  config.workers = 4;
  const auto b = stage1_find_references(sys.model, sys.dist, config, 0);
  const bool same_refs = sorted(a.lower.members()) == sorted(b.lower.members()) &&
                         sorted(a.upper.members()) == sorted(b.upper.members());
  return {differing == 0 && same_refs,
          fmt("%d classify variants, %d differ; stage-1 sets %s across 1 and 4 workers (%zu refs)", variants,
              differing, same_refs ? "identical" : "differ", a.lower.size() + a.upper.size())};
}

Outcome multistate_composition() {
  const auto a = assemble_pmf({2.47e-3, 1.04e-1});
  auto sig3 = [](double v) { return std::stod(fmt("%.3g", v)); };
  const bool ok = sig3(a.pmf[1]) == 0.102 && sig3(a.pmf[2]) == 0.896;
  return {ok, fmt("P(S=1)=%.3g P(S=2)=%.3g", a.pmf[1], a.pmf[2])};
}

Outcome convergence_structure() {
  const auto t0 = Clock::now();
  const int nodes = 30;
  const Graph g = random_geometric_graph(nodes, radius_for_mean_degree(nodes, 8.0), 2024);
  const auto [o, d] = select_od_pair(g);
  const SystemModel model = make_graph_model(g, single_od_connectivity(g, o, d), 2, 2);
  const std::array<double, 2> row{0.05, 0.95};
  const auto dist = ComponentDistribution::identical(g.n_edges(), row);

  RunConfig config;
  config.H = 100'000;
  config.eps_u = 1e-5;
  config.r_max = 10'000;
  config.seed = 7;
  const auto searched = stage1_find_references(model, dist, config, 0);
  const auto refs = static_cast<std::int64_t>(searched.lower.size() + searched.upper.size());
  const double pu_searched = searched.trace.back().p_unclassified;

  RunConfig raw = config;
  raw.boundary_search = false;
  raw.r_max = 10 * refs;
  raw.parallel_searches = static_cast<int>(std::max<std::int64_t>(1, raw.r_max / 25));
  const auto ablation = stage1_find_references(model, dist, raw, 0);
  const auto raw_refs = static_cast<std::int64_t>(ablation.lower.size() + ablation.upper.size());
  const double pu_raw = ablation.trace.back().p_unclassified;

  const bool ok = searched.converged && pu_searched <= 1e-5 && !ablation.converged && raw_refs >= raw.r_max &&
                  pu_raw > 0.5;
  return {ok, fmt("graph %d nodes/%d edges; search: %lld refs, p_u=%.2g; no search: %lld refs, p_u=%.3f; %.1f s",
                  g.n_nodes, g.n_edges(), static_cast<long long>(refs), pu_searched,
                  static_cast<long long>(raw_refs), pu_raw, seconds_since(t0))};
}

Outcome throughput_smoke() {
  const int n = 262, m = 2;
  const std::int64_t H = 1'000'000;
  const std::array<double, 2> row{0.05, 0.95};
  const auto dist = ComponentDistribution::identical(n, row);
  const auto batch = sample_batch(dist, H, 1, 0);
  const auto samples = EncodedBatch::from_states(EncodingKind::Sample, batch.vectors, m);
  std::mt19937_64 rng(9);

  auto time_refs = [&](int R) {
    std::vector<StateVector> rs;
    for (int i = 0; i < R; ++i) rs.push_back(test::random_vector(rng, n, m));
    const auto refs = EncodedBatch::from_vectors(EncodingKind::UpperRef, rs, n, m);
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      std::int64_t sink = 0;
      const auto t0 = Clock::now();
      for_each_violation_chunk(samples, refs, kDefaultChunkSize, 1,
                               [&](std::int64_t, const ViolationMatrix& block) { sink += block(0, 0); });
      best = std::min(best, seconds_since(t0));
      if (sink < 0) std::puts("");
    }
    return best;
  };

  const double t49 = time_refs(49), t98 = time_refs(98), t196 = time_refs(196);

  ReferenceSet lower(Side::Lower, 0), upper(Side::Upper, 0);
  for (int i = 0; i < 49; ++i) upper.insert({test::random_vector(rng, n, m), Side::Upper, 0});
  const auto t0 = Clock::now();
  classify(batch, lower, upper, m);
  const double t_classify = seconds_since(t0);

  const double r2 = t98 / t49, r4 = t196 / t49;
  const bool ok = t49 <= 120.0 && t_classify <= 120.0 && std::abs(r2 / 2 - 1) <= 0.3 && std::abs(r4 / 4 - 1) <= 0.3;
  return {ok, fmt("R=49: %.3f s (classify %.3f s); R=98/49 ratio %.2f, R=196/49 ratio %.2f", t49, t_classify,
                  r2, r4)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "encoding fidelity", encoding_fidelity},
      {2, "classification counting", classification_counting},
      {3, "boundary search trajectory", boundary_trajectory},
      {4, "oracle equivalence", oracle_equivalence},
      {5, "dominance/violation equivalence", violation_equivalence},
      {6, "chunk and parallel invariance", chunk_parallel_invariance},
      {7, "multi-state composition", multistate_composition},
      {8, "convergence structure", convergence_structure},
      {9, "throughput smoke", throughput_smoke},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::printf("%s  criterion %d  %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("N/A   criterion 10 full-scale claims: excluded (hardware-specific timings, memory figures and "
              "unpublished graphs); covered by criteria 4-9\n");
  return failed == 0 ? 0 : 1;
}
