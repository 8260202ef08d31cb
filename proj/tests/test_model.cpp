#include <gtest/gtest.h>

#include <array>
#include <thread>

#include "rsr/model.hpp"
#include "rsr/sysfn.hpp"

namespace rsr {
namespace {

TEST(SystemModel, EvaluatesKOutOfN) {
  SystemModel m(3, 2, 2, k_out_of_n(2, 3));
  EXPECT_EQ(1, m.evaluate(StateVector{1, 1, 0}));
  EXPECT_EQ(0, m.evaluate(StateVector{1, 0, 0}));
  EXPECT_EQ(1, m.evaluate(StateVector{1, 1, 1}));
  EXPECT_EQ(3u, m.evaluations());
}

TEST(SystemModel, RejectsInvalidVectors) {
  SystemModel m(3, 2, 2, k_out_of_n(2, 3));
  EXPECT_THROW(m.evaluate(StateVector{1, 1}), ModelError);
  EXPECT_THROW(m.evaluate(StateVector{1, 2, 0}), ModelError);
  EXPECT_EQ(0u, m.evaluations());
}

TEST(SystemModel, RejectsOutOfRangeSystemState) {
  SystemModel m(1, 2, 2, [](StateView) { return 5; });
  EXPECT_THROW(m.evaluate(StateVector{0}), std::runtime_error);
}

TEST(SystemModel, RejectsBadShape) {
  EXPECT_THROW(SystemModel(0, 2, 2, k_out_of_n(1, 1)), ModelError);
  EXPECT_THROW(SystemModel(1, 300, 2, k_out_of_n(1, 1)), ModelError);
  EXPECT_THROW(SystemModel(1, 2, 1, k_out_of_n(1, 1)), ModelError);
  EXPECT_THROW(SystemModel(1, 2, 2, PerformanceFn{}), ModelError);
}

TEST(SystemModel, AllTopStatesGiveMaximum) {
  SystemModel m(4, 3, 3, k_out_of_n(2, 4));
  EXPECT_EQ(2, m.evaluate(StateVector(4, 2)));
}

TEST(SystemModel, CounterIsSharedAcrossCopiesAndThreads) {
  SystemModel m(3, 2, 2, k_out_of_n(2, 3));
  SystemModel copy = m;
  {
    std::array<std::jthread, 4> pool;
    for (auto& t : pool)
      t = std::jthread([&copy] {
        for (int i = 0; i < 1000; ++i) copy.evaluate(StateVector{1, 0, 1});
      });
  }
  EXPECT_EQ(4000u, m.evaluations());
  m.reset_evaluations();
  EXPECT_EQ(0u, copy.evaluations());
}

TEST(ComponentDistribution, ValidatesRows) {
  ComponentDistribution::Table t(2, 2);
  t << 0.1, 0.9, 0.5, 0.5;
  EXPECT_NO_THROW(ComponentDistribution{t});
  t(0, 0) = 0.2;
  EXPECT_THROW(ComponentDistribution{t}, ModelError);
  t << -0.1, 1.1, 0.5, 0.5;
  EXPECT_THROW(ComponentDistribution{t}, ModelError);
}

TEST(ComponentDistribution, Identical) {
  const std::array<double, 3> row{0.2, 0.3, 0.5};
  auto d = ComponentDistribution::identical(4, row);
  EXPECT_EQ(4, d.n_components());
  EXPECT_EQ(3, d.n_states());
  EXPECT_DOUBLE_EQ(0.3, d.prob(3, 1));
  SystemModel m(4, 3, 3, k_out_of_n(1, 4));
  EXPECT_NO_THROW(d.check_compatible(m));
  SystemModel other(5, 3, 3, k_out_of_n(1, 5));
  EXPECT_THROW(d.check_compatible(other), ModelError);
}

TEST(CheckCoherency, BuiltInsAreMonotone) {
  SystemModel kn(6, 4, 4, k_out_of_n(3, 6));
  EXPECT_TRUE(check_coherency(kn, 10'000, 7).empty());
}

TEST(CheckCoherency, FindsAntiMonotoneFunction) {
  SystemModel anti(1, 2, 2, [](StateView x) { return 1 - x[0]; });
  const auto v = check_coherency(anti, 1000, 1);
  ASSERT_FALSE(v.empty());
  for (const auto& p : v) {
    EXPECT_EQ(StateVector{0}, p.lower);
    EXPECT_EQ(StateVector{1}, p.upper);
    EXPECT_GT(p.phi_lower, p.phi_upper);
  }
}

TEST(CheckCoherency, RejectsZeroTrials) {
  SystemModel kn(2, 2, 2, k_out_of_n(1, 2));
  EXPECT_THROW(check_coherency(kn, 0, 1), ModelError);
}

}  // namespace
}  // namespace rsr
