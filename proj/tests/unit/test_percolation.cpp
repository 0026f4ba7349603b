#include <gtest/gtest.h>

#include <cmath>

#include "perclab/ball.hpp"
#include "perclab/errors.hpp"
#include "perclab/percolation.hpp"
#include "../support/oracles.hpp"

using namespace perclab;

TEST(EdgeState, PureAndSymmetric) {
  const VertexRef a{1, 2}, b{1, 3};
  EXPECT_EQ(edge_uniform(7, 11, a, b), edge_uniform(7, 11, b, a));
  EXPECT_EQ(edge_uniform(7, 11, a, b), edge_uniform(7, 11, EdgeKey::of(a, b)));
  EXPECT_NE(edge_uniform(7, 11, a, b), edge_uniform(7, 12, a, b));
  EXPECT_NE(edge_uniform(7, 11, a, b), edge_uniform(8, 11, a, b));
}

TEST(EdgeState, ExtremesAndNesting) {
  const Ball b = ball(*square_lattice(), 6);
  for (std::uint64_t trial = 0; trial < 20; ++trial)
    for (const auto& [i, j] : b.edges) {
      const EdgeKey e = EdgeKey::of(b.vertices[i], b.vertices[j]);
      const double u = edge_uniform(3, trial, e);
      ASSERT_GE(u, 0.0);
      ASSERT_LT(u, 1.0);
      EXPECT_FALSE(edge_open(3, trial, e, 0.0));
      EXPECT_TRUE(edge_open(3, trial, e, 1.0));
      bool prev = false;
      for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const bool now = edge_open(3, trial, e, p);
        EXPECT_TRUE(!prev || now);
        prev = now;
      }
    }
}

TEST(EdgeState, RoughlyUniform) {
  const Ball b = ball(*square_lattice(), 10);
  std::int64_t open = 0, total = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial)
    for (const auto& [i, j] : b.edges) {
      open += edge_open(1, trial, EdgeKey::of(b.vertices[i], b.vertices[j]), 0.3);
      ++total;
    }
  const Interval ci = wilson_interval(open, total, 4.0);
  EXPECT_LT(ci.lo, 0.3);
  EXPECT_GT(ci.hi, 0.3);
}

TEST(Wilson, Bounds) {
  for (std::int64_t n : {1, 10, 1000})
    for (std::int64_t k = 0; k <= n; k += std::max<std::int64_t>(1, n / 7)) {
      const Interval ci = wilson_interval(k, n);
      const double point = static_cast<double>(k) / n;
      EXPECT_GE(ci.lo, 0.0);
      EXPECT_LE(ci.lo, point + 1e-12);
      EXPECT_GE(ci.hi, point - 1e-12);
      EXPECT_LE(ci.hi, 1.0);
    }
  const Interval ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.lo, 0.4038, 1e-4);
  EXPECT_NEAR(ci.hi, 0.5962, 1e-4);
}

TEST(Crossing, TrivialProbabilities) {
  for (const auto& g : {regular_tree(3), square_lattice(), fig1_graph(3), triangle_cactus()}) {
    const PercEstimate one = crossing_probability(*g, 5, 1.0, 50, 1);
    EXPECT_EQ(one.point, 1.0);
    const PercEstimate zero = crossing_probability(*g, 5, 0.0, 50, 1);
    EXPECT_EQ(zero.point, 0.0);
    const auto curve = theta_curve(*g, 5, {0.0, 1.0}, 30, 2);
    EXPECT_EQ(curve[0].point, 0.0);
    EXPECT_EQ(curve[1].point, 1.0);
  }
}

TEST(Crossing, EstimateInvariantsAndDeterminism) {
  const auto g = hexagonal_lattice();
  const PercEstimate a = crossing_probability(*g, 8, 0.6, 500, 42);
  const PercEstimate b = crossing_probability(*g, 8, 0.6, 500, 42);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_LE(0.0, a.ci_low);
  EXPECT_LE(a.ci_low, a.point);
  EXPECT_LE(a.point, a.ci_high);
  EXPECT_LE(a.ci_high, 1.0);
  // worker count does not change results
  const PercEstimate c = crossing_probability(*g, 8, 0.6, 500, 42, {kDefaultVertexBudget, 3});
  EXPECT_EQ(a.successes, c.successes);
}

TEST(Crossing, RejectsBadConfig) {
  EXPECT_THROW(crossing_probability(*square_lattice(), 3, 1.5, 10, 1), InvalidParameter);
  EXPECT_THROW(crossing_probability(*square_lattice(), 3, 0.5, 0, 1), InvalidParameter);
}

// Per-trial crossing indicators are nested in p, so the curve never decreases.
TEST(Crossing, MonotoneCoupling) {
  const std::vector<double> grid{0.2, 0.35, 0.45, 0.5, 0.55, 0.65, 0.8};
  for (const auto& g : {square_lattice(), regular_tree(3), triangle_cactus()}) {
    const auto curve = theta_curve(*g, 10, grid, 400, 9);
    for (std::size_t i = 1; i < curve.size(); ++i)
      EXPECT_LE(curve[i - 1].successes, curve[i].successes) << g->name();
  }
  ClusterExplorer ex(*square_lattice(), 12, kDefaultVertexBudget);
  for (std::uint64_t t = 0; t < 200; ++t) {
    int prev = 0;
    for (double p : grid) {
      const int r = ex.run(p, 5, t).reached;
      EXPECT_GE(r, prev);
      prev = r;
    }
  }
}

TEST(Crossing, SharedTrialsAcrossRadii) {
  const auto profile = crossing_profile(*regular_tree(3), {4, 8, 16}, 0.55, 2000, 4);
  ASSERT_EQ(profile.size(), 3u);
  EXPECT_GE(profile[0].successes, profile[1].successes);
  EXPECT_GE(profile[1].successes, profile[2].successes);
  EXPECT_EQ(profile[1].successes, crossing_probability(*regular_tree(3), 8, 0.55, 2000, 4).successes);
}

TEST(Crossing, BudgetHitsCountAsSuccesses) {
  const PercEstimate e =
      crossing_probability(*regular_tree(3), 40, 0.9, 20, 1, {/*vertex_budget=*/20, 1});
  EXPECT_GT(e.budget_flagged, 0);
  EXPECT_GE(e.successes, e.budget_flagged);
}

TEST(TreeOracle, ExactRecursionMatchesExplicitSum) {
  for (int d : {3, 4})
    for (double p : {0.2, 0.4, 0.5, 0.6, 0.9})
      for (int r : {0, 1, 2, 5, 12})
        EXPECT_NEAR(tree_crossing_exact(d, p, r), oracle::gw_survival(d, p, r), 1e-12);
  EXPECT_NEAR(oracle::gw_survival(3, 0.4, 12), 0.050223, 1e-6);
  EXPECT_NEAR(oracle::gw_survival(3, 0.6, 12), 0.718585, 1e-6);
}

// Monte Carlo agrees with the Galton-Watson value inside the 95% CI at no
// fewer than 90% of grid points.
TEST(TreeOracle, MonteCarloAgreement) {
  int agree = 0, total = 0;
  for (int d : {3, 4})
    for (int r : {4, 10})
      for (double p : {0.25, 0.35, 0.45, 0.5, 0.55, 0.65, 0.75}) {
        const double exact = oracle::gw_survival(d, p, r);
        const PercEstimate e = crossing_probability(*regular_tree(d), r, p, 4000, 100 + total);
        agree += e.ci_low <= exact && exact <= e.ci_high;
        ++total;
      }
  EXPECT_GE(agree, 0.9 * total) << agree << " of " << total;
}

TEST(TreeOracle, SpecExamples) {
  const auto curve = theta_curve(*regular_tree(3), 12, {0.4, 0.6}, 20000, 1);
  for (const auto& e : curve) {
    const double exact = oracle::gw_survival(3, e.p, 12);
    EXPECT_LE(e.ci_low, exact + 0.003);
    EXPECT_GE(e.ci_high, exact - 0.003);
  }
  const auto sq = theta_curve(*square_lattice(), 24, {0.3, 0.7}, 2000, 1);
  EXPECT_LT(sq[0].point, 0.01);
  EXPECT_GT(sq[1].point, 0.9);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(*regular_tree(3), 0.3, {4, 8, 16}, 20000, 1).phase, Phase::subcritical);
  EXPECT_EQ(classify(*regular_tree(3), 0.7, {4, 8, 16}, 20000, 1).phase, Phase::supercritical);
  EXPECT_EQ(classify(*ladder(), 0.9, {16, 32, 64}, 20000, 1).phase, Phase::subcritical);
}

// The GW limit at p = 0.7 on T_3, as a value classify's supercritical verdict
// must be consistent with.
TEST(Classify, GwLimitAtPoint7) {
  EXPECT_NEAR(oracle::gw_survival(3, 0.7, 200), 0.921, 0.001);
  const auto c = classify(*regular_tree(3), 0.7, {4, 8, 16}, 20000, 1);
  EXPECT_GT(c.estimates.back().ci_high, oracle::gw_survival(3, 0.7, 200));
}

// Below 1/(d-1), wherever the first-moment bound d((d-1)p)^(r-1) is under
// 0.01 at the largest radius, classify never answers supercritical.
TEST(Classify, FirstMomentConsistency) {
  struct Case {
    GraphPtr g;
    std::vector<int> radii;
  };
  const std::vector<Case> cases{{regular_tree(3), {8, 16, 32}},
                                {square_lattice(), {8, 16, 32}},
                                {hexagonal_lattice(), {8, 16, 32}},
                                {fig1_graph(3), {8, 16, 32}},
                                {triangle_cactus(), {8, 16, 32}}};
  for (const auto& c : cases) {
    const int d = c.g->degree_bound();
    for (double frac : {0.5, 0.8, 0.95}) {
      const double p = frac / (d - 1);
      const int r = c.radii.back();
      if (d * std::pow((d - 1) * p, r - 1) >= 0.01) continue;
      EXPECT_NE(classify(*c.g, p, c.radii, 3000, 2).phase, Phase::supercritical)
          << c.g->name() << " p=" << p;
    }
  }
}

TEST(Classify, ThresholdsAreHonoured) {
  ClassifyThresholds strict;
  strict.plateau = 0.999;
  const auto c = classify(*regular_tree(3), 0.7, {4, 8, 16}, 5000, 1, strict);
  EXPECT_NE(c.phase, Phase::supercritical);
  EXPECT_THROW(classify(*regular_tree(3), 0.7, {8}, 100, 1), InvalidParameter);
}

TEST(EstimatePc, RegularTree) {
  const PcBracket b = estimate_pc(*regular_tree(3), {8, 12, 16}, 20000, 0.01, kDefaultSeed);
  EXPECT_LT(b.lo, 0.5);
  EXPECT_GT(b.hi, 0.5);
  EXPECT_LE(b.hi - b.lo, 0.07);
  EXPECT_LT(b.lo, b.hi);
  EXPECT_GT(b.lo, 0.0);
  EXPECT_LT(b.hi, 1.0);
  EXPECT_FALSE(b.probes.empty());
  EXPECT_THROW(estimate_pc(*regular_tree(3), {8, 12, 16}, 100, 0.001, 1), InvalidParameter);
}

TEST(EstimatePc, CactusOracle) {
  const double pc = oracle::cactus_pc();
  EXPECT_NEAR(2 * pc * pc * (1 + pc - pc * pc), 1.0, 1e-12);
  EXPECT_NEAR(pc, 0.637, 0.001);
  const PcBracket b = estimate_pc(*triangle_cactus(), {8, 16, 32}, 20000, 0.01, kDefaultSeed);
  EXPECT_LT(b.lo, pc);
  EXPECT_GT(b.hi, pc);
}
