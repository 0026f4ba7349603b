#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "perclab/errors.hpp"
#include "perclab/trees.hpp"
#include "../support/oracles.hpp"

using namespace perclab;

TEST(Levels, RegularTree) {
  const LevelProfile p = level_profile(*regular_tree(3), 20);
  EXPECT_EQ(p.sizes[0], 1u);
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(p.sizes[k], 3ull << (k - 1));
  EXPECT_EQ(p.window_start, 10);
  // (3 * 2^(k-1))^(1/k) falls towards 2 over the tail window k = 10..20
  EXPECT_NEAR(p.gr_upper, std::pow(3.0 * 512, 0.1), 1e-12);
  EXPECT_NEAR(p.gr_lower, std::pow(3.0 * (1 << 19), 0.05), 1e-12);
  EXPECT_LE(p.gr_lower, p.gr_upper);
}

TEST(Levels, Fig1ClosedForm) {
  for (std::uint64_t d : {3, 4, 5}) {
    const LevelProfile p = level_profile(*fig1_tree(static_cast<int>(d)), 12);
    EXPECT_EQ(p.sizes[1], d);
    std::uint64_t expect = (d - 2) * (d + 1);
    for (int n = 2; n <= 12; ++n, expect *= d - 1) EXPECT_EQ(p.sizes[n], expect);
  }
}

// Class recursion and plain enumeration agree wherever both are affordable.
TEST(Levels, ClassesMatchEnumeration) {
  std::mt19937_64 rng(5);
  const auto t = oracle::random_tree(rng, 150, 9);
  const oracle::FiniteTreeModel model(t);
  const LevelProfile p = level_profile(model, 9);
  std::vector<std::uint64_t> expect(10, 0);
  for (int l : t.level) ++expect[l];
  EXPECT_EQ(p.sizes, expect);
  EXPECT_EQ(p.method, "enumeration");
  EXPECT_EQ(level_profile(*fig1_tree(3), 8).method, "subtree classes");
}

TEST(Levels, Errors) {
  EXPECT_THROW(level_profile(*fig1_graph(3), 6), NotATree);
  EXPECT_THROW(level_profile(*square_lattice(), 6), NotATree);
  std::mt19937_64 rng(1);
  const oracle::FiniteTreeModel big(oracle::random_tree(rng, 400, 12));
  EXPECT_THROW(level_profile(big, 12, 50), BudgetExceeded);
}

TEST(Cutset, LineDecays) {
  for (int n : {4, 8, 12})
    EXPECT_NEAR(min_cutset_value(*regular_tree(2), n, 1.5).value, 2 * std::pow(1.5, -n), 1e-12);
}

TEST(Cutset, MonotoneAndBelowFullLevel) {
  for (const auto& g : {regular_tree(3), fig1_tree(3), fig1_tree(4)}) {
    const LevelProfile levels = level_profile(*g, 16);
    for (double lambda : {1.5, 2.0, 2.5, 3.5}) {
      double prev = INFINITY;
      for (int depth = 1; depth <= 16; ++depth) {
        const double v = min_cutset_value(*g, depth, lambda).value;
        EXPECT_LE(v, prev * (1 + 1e-12));
        EXPECT_LE(v, levels.sizes[depth] * std::pow(lambda, -depth) * (1 + 1e-12));
        prev = v;
      }
    }
    for (int depth : {4, 12}) {
      double prev = INFINITY;
      for (double lambda : {1.1, 1.5, 2.0, 2.5, 3.0}) {
        const double v = min_cutset_value(*g, depth, lambda).value;
        EXPECT_LE(v, prev);
        prev = v;
      }
    }
  }
  EXPECT_THROW(min_cutset_value(*regular_tree(3), 4, 1.0), InvalidParameter);
}

// The leaf-to-root recursion against Boost's push-relabel max flow with the
// sink tied to the depth boundary, on 100 random trees of at most 200 edges.
TEST(Cutset, MaxFlowOracle) {
  std::mt19937_64 rng(20240917);
  for (int i = 0; i < 100; ++i) {
    const int edges = std::uniform_int_distribution<int>(5, 200)(rng);
    const int depth = std::uniform_int_distribution<int>(2, 9)(rng);
    const double lambda = std::uniform_real_distribution<double>(1.01, 3.0)(rng);
    const auto t = oracle::random_tree(rng, edges, depth + 2);
    const oracle::FiniteTreeModel model(t);
    const double flow = oracle::tree_max_flow(t, depth, lambda);
    EXPECT_NEAR(min_cutset_value(model, depth, lambda).value, flow, 1e-9 * std::max(1.0, flow))
        << "tree " << i << " edges " << edges << " depth " << depth << " lambda " << lambda;
  }
}

TEST(Branching, Examples) {
  for (const auto& [g, br] : std::vector<std::pair<GraphPtr, double>>{
           {regular_tree(3), 2.0}, {fig1_tree(3), 2.0}, {fig1_tree(5), 4.0}}) {
    const BranchingBracket b = branching_bracket(*g, 16, 0.1);
    EXPECT_LE(b.lo, br) << g->name();
    EXPECT_GE(b.hi, br) << g->name();
    EXPECT_LE(b.hi - b.lo, 0.1) << g->name();
    EXPECT_GE(b.lo, 1.0);
    EXPECT_LT(b.lo, b.hi);
    EXPECT_FALSE(b.decision_log.empty());
  }
  EXPECT_THROW(branching_bracket(*regular_tree(3), 4, 0.1), InvalidParameter);
}

TEST(Branching, Interval) {
  BranchingBracket b;
  b.lo = 1.95;
  b.hi = 2.05;
  const Interval pc = pc_from_branching(b);
  EXPECT_NEAR(pc.lo, 0.4878, 1e-4);
  EXPECT_NEAR(pc.hi, 0.5128, 1e-4);
  const Interval tree = pc_from_branching(branching_bracket(*regular_tree(3), 16, 0.1));
  EXPECT_LE(tree.lo, 0.5);
  EXPECT_GE(tree.hi, 0.5);
}

// Growth rate equals branching number on the counterexample trees: the gr
// estimate sits inside the br bracket.
TEST(Branching, GrowthInsideBracket) {
  for (int d : {3, 4, 5}) {
    const LevelProfile p = level_profile(*fig1_tree(d), 30);
    const BranchingBracket b = branching_bracket(*fig1_tree(d), 16, 0.1);
    EXPECT_GE(p.gr_lower, b.lo) << "d=" << d;
    EXPECT_LE(p.gr_upper, b.hi) << "d=" << d;
  }
}

TEST(Subperiodic, Examples) {
  const auto w1 = subperiodicity_witness(*fig1_tree(3), 1, 6, 6);
  EXPECT_TRUE(w1.found);
  EXPECT_TRUE(w1.failures.empty());
  EXPECT_EQ(w1.mapping.size(), w1.checked);
  for (const auto& [x, fx] : w1.mapping) EXPECT_LE(fx.size(), 1u);

  EXPECT_TRUE(subperiodicity_witness(*regular_tree(3), 0, 6, 4).found);

  const auto w0 = subperiodicity_witness(*fig1_tree(3), 0, 3, 3);
  EXPECT_FALSE(w0.found);
  ASSERT_FALSE(w0.failures.empty());
  EXPECT_FALSE(w0.notes.empty());
}
