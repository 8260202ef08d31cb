#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "rsr/oracle.hpp"
#include "test_support.hpp"

namespace rsr::oracle {
namespace {

ComponentDistribution binary(int n, double p_fail) {
  const std::array<double, 2> row{p_fail, 1.0 - p_fail};
  return ComponentDistribution::identical(n, row);
}

TEST(Exact, SeriesAndParallel) {
  const auto series = exact_probabilities(SystemModel(3, 2, 2, k_out_of_n(3, 3)), binary(3, 0.1));
  EXPECT_NEAR(1 - 0.729, series.cumulative[0], 1e-15);
  EXPECT_EQ(1.0, series.cumulative[1]);
  EXPECT_EQ((std::vector<std::uint64_t>{7, 1}), series.state_count);

  const auto parallel = exact_probabilities(SystemModel(3, 2, 2, k_out_of_n(1, 3)), binary(3, 0.1));
  EXPECT_NEAR(0.001, parallel.cumulative[0], 1e-15);
  EXPECT_NEAR(0.999, parallel.pmf()[1], 1e-15);
}

TEST(Exact, UniformWorkedExample) {
  const std::array<double, 5> row{0.2, 0.2, 0.2, 0.2, 0.2};
  const auto dist = ComponentDistribution::identical(2, row);
  const auto r = exact_probabilities(test::three_generator_model(), dist);
  // Vectors at or above (1,4), (4,0) or (3,2): 4 + 5 + 6 - 1 - 2 - 3 + 1 = 10.
  EXPECT_EQ(10u, r.state_count[1]);
  EXPECT_NEAR(15.0 / 25.0, r.cumulative[0], 1e-15);
}

TEST(Exact, TooLarge) {
  const auto model = SystemModel(25, 2, 2, k_out_of_n(1, 25));
  EXPECT_THROW(exact_probabilities(model, binary(25, 0.5)), TooLarge);
}

TEST(ExactReferenceProbability, InclusionOfUpperSets) {
  const std::array<double, 5> row{0.2, 0.2, 0.2, 0.2, 0.2};
  const auto dist = ComponentDistribution::identical(2, row);
  // (1,4): 4 vectors; (4,0): 5 vectors; overlap (4,4).
  EXPECT_NEAR(8.0 / 25.0, exact_reference_probability(dist, Side::Upper, {{1, 4}, {4, 0}}), 1e-15);
  EXPECT_NEAR(6.0 / 25.0, exact_reference_probability(dist, Side::Lower, {{1, 2}}), 1e-15);
  EXPECT_EQ(0.0, exact_reference_probability(dist, Side::Lower, {}));
  ReferenceSet set(Side::Upper, 0);
  set.insert({{0, 0}, Side::Upper, 0});
  EXPECT_NEAR(1.0, exact_reference_probability(dist, set), 1e-15);
}

TEST(Dominates, Basics) {
  EXPECT_TRUE(dominates(StateVector{0, 1}, StateVector{1, 1}));
  EXPECT_TRUE(dominates(StateVector{1, 1}, StateVector{1, 1}));
  EXPECT_FALSE(dominates(StateVector{2, 0}, StateVector{1, 1}));
  EXPECT_THROW(dominates(StateVector{0}, StateVector{0, 0}), ModelError);
}

TEST(CrudeMonteCarlo, WithinFourSigmaOfExact) {
  SystemModel series(3, 2, 2, k_out_of_n(3, 3));
  const auto mc = crude_monte_carlo(series, binary(3, 0.1), 1'000'000, 5, 0);
  const double p = 1 - 0.729;
  EXPECT_NEAR(p, mc.p_lower, 4 * std::sqrt(p * (1 - p) / 1e6));
  EXPECT_EQ(1'000'000, mc.H);
  EXPECT_EQ(mc.p_lower, static_cast<double>(mc.lower_count) / 1e6);
  ASSERT_TRUE(mc.cov.has_value());
}

TEST(CrudeMonteCarlo, NoLowerSamples) {
  SystemModel parallel(3, 2, 2, k_out_of_n(1, 3));
  const auto mc = crude_monte_carlo(parallel, binary(3, 0.0), 1000, 5, 0);
  EXPECT_EQ(0, mc.lower_count);
  EXPECT_FALSE(mc.cov.has_value());
}

TEST(BfsConnected, Path) {
  const auto g = test::path_graph(4);
  EXPECT_TRUE(bfs_connected(g, StateVector{1, 1, 1}, 0, 3));
  EXPECT_FALSE(bfs_connected(g, StateVector{1, 0, 1}, 0, 3));
  EXPECT_TRUE(bfs_connected(g, StateVector{1, 0, 1}, 2, 3));
}

}  // namespace
}  // namespace rsr::oracle
