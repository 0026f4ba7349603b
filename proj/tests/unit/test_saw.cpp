#include <gtest/gtest.h>

#include <cmath>

#include "perclab/errors.hpp"
#include "perclab/saw.hpp"
#include "../support/oracles.hpp"

using namespace perclab;

namespace {

std::vector<GraphPtr> zoo() {
  return {regular_tree(3),     fig1_tree(3), fig1_graph(3),   square_lattice(),
          hexagonal_lattice(), ladder(),     triangle_cactus(), regular_tree(4)};
}

}  // namespace

TEST(Saw, MatchesNaiveEnumerator) {
  for (const auto& g : zoo()) {
    SCOPED_TRACE(g->name());
    const SawTable t = count_saws(*g, 8);
    EXPECT_EQ(t.counts, oracle::naive_saw_counts(*g, g->root(), 8));
    const SawTable t2 = count_saws(*g, 8, kDefaultSawBudget, 3);
    EXPECT_EQ(t.counts, t2.counts);
  }
  const auto g = fig1_graph(3);
  const VertexRef off{2, 1};
  EXPECT_EQ(count_saws(*g, off, 8).counts, oracle::naive_saw_counts(*g, off, 8));
}

TEST(Saw, SquareSmallCounts) {
  const SawTable t = count_saws(*square_lattice(), 4);
  EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{1, 4, 12, 36, 100}));
  EXPECT_EQ(oracle::naive_saw_counts(*square_lattice(), {0, 0}, 4), t.counts);
  const SawTable t10 = count_saws(*square_lattice(), 10);
  EXPECT_EQ(t10.counts[10], 44100u);
  const double per10 = std::pow(44100.0, 0.1);
  EXPECT_GT(per10, 2.6);
  EXPECT_LT(per10, 3.1);
}

TEST(Saw, TreeClosedForm) {
  for (int d : {3, 4}) {
    const int n_max = d == 3 ? 15 : 11;
    const SawTable t = count_saws(*regular_tree(d), n_max);
    std::uint64_t expect = d;
    for (int n = 1; n <= n_max; ++n, expect *= d - 1) EXPECT_EQ(t.counts[n], expect);
  }
}

TEST(Saw, ExtensionBound) {
  for (const auto& g : zoo()) {
    const int d = g->degree_bound();
    const SawTable t = count_saws(*g, 10);
    double bound = d;
    for (int n = 1; n <= 10; ++n, bound *= d - 1) EXPECT_LE(static_cast<double>(t.counts[n]), bound);
  }
}

TEST(Saw, BudgetReportsCompletedLength) {
  try {
    count_saws(*square_lattice(), 20, 10000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_GE(e.completed(), 4);
    EXPECT_LT(e.completed(), 20);
    // that length really fits in the budget
    EXPECT_NO_THROW(count_saws(*square_lattice(), e.completed(), 10000));
  }
  EXPECT_THROW(count_saws(*square_lattice(), 0), InvalidParameter);
}

TEST(Saw, PerOrbitTables) {
  const auto tables = count_saws_per_orbit(*hexagonal_lattice(), 8);
  ASSERT_FALSE(tables.empty());
  for (const auto& t : tables) EXPECT_EQ(t.counts, count_saws(*hexagonal_lattice(), t.origin, 8).counts);
}

TEST(Mu, TreeEstimates) {
  const SawTable t = count_saws(*regular_tree(3), 15);
  const MuEstimate m = mu_estimates(t, true);
  for (int n = 1; n <= 15; ++n)
    EXPECT_NEAR(m.per_n[n - 1], std::pow(3.0 * std::pow(2.0, n - 1), 1.0 / n), 1e-12);
  EXPECT_GT(m.upper_bound, 2.0);
  EXPECT_LT(m.upper_bound, 2.06);
  EXPECT_EQ(m.best_n, 15);
  EXPECT_TRUE(m.rigorous);
  EXPECT_NEAR(m.pc_lower, 1.0 / m.upper_bound, 1e-15);
  for (std::size_t k = 1; k < m.pc_lower_running.size(); ++k)
    EXPECT_GE(m.pc_lower_running[k], m.pc_lower_running[k - 1]);
  EXPECT_FALSE(mu_estimates(count_saws(*fig1_graph(3), 6), false).rigorous);
}

// On every transitive cyclic cubic zoo graph some c_n^(1/n) with n <= 24 dips
// below 2 = d - 1.
TEST(Mu, CubicWitnessBelowTwo) {
  for (const auto& g : {hexagonal_lattice(), triangle_cactus(), ladder()}) {
    const MuEstimate m = mu_estimates(count_saws(*g, 24), true);
    EXPECT_LT(m.upper_bound, 2.0) << g->name();
    EXPECT_LE(m.best_n, 24);
  }
}

TEST(Mu, Submultiplicative) {
  for (const auto& g : {square_lattice(), hexagonal_lattice(), triangle_cactus(), ladder()}) {
    const SawTable t = count_saws(*g, 12);
    for (int m = 1; m <= 6; ++m)
      for (int n = 1; m + n <= 12; ++n) EXPECT_LE(t.counts[m + n], t.counts[m] * t.counts[n]);
  }
}

TEST(FirstMoment, Examples) {
  const SawTable t = count_saws(*regular_tree(3), 12);
  const auto zero = first_moment_curve(t, {0.0});
  for (const auto& pt : zero)
    if (pt.n >= 1) EXPECT_EQ(pt.bound, 0.0);
  for (const auto& pt : first_moment_curve(t, {0.4}))
    if (pt.n == 10) EXPECT_NEAR(pt.bound, 3 * 512 * std::pow(0.4, 10), 1e-12);
  EXPECT_NEAR(3 * 512 * std::pow(0.4, 10), 0.161, 0.001);
  // below 1 / mu the bound decays in n
  const auto curve = first_moment_curve(t, {0.45});
  double prev = 10.0;
  for (const auto& pt : curve)
    if (pt.n >= 1) {
      EXPECT_LT(pt.bound, prev);
      prev = pt.bound;
    }
  EXPECT_THROW(first_moment_curve(t, {1.2}), InvalidParameter);
}
