#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "perclab/ball.hpp"
#include "perclab/errors.hpp"
#include "perclab/graph.hpp"

using namespace perclab;

namespace {

std::vector<GraphPtr> zoo() {
  return {regular_tree(2),     regular_tree(3),     regular_tree(4),   fig1_tree(3),
          fig1_tree(4),        fig1_graph(3),       fig1_graph(5),     square_lattice(),
          hexagonal_lattice(), ladder(),            triangle_cactus()};
}

std::vector<std::size_t> level_counts(const Ball& b) {
  std::vector<std::size_t> n(b.radius + 1, 0);
  for (int d : b.dist) ++n[d];
  return n;
}

}  // namespace

TEST(VertexRef, TextRoundTripAndOrder) {
  const VertexRef v{3, -1, 0};
  EXPECT_EQ(v.to_string(), "[3,-1,0]");
  EXPECT_EQ(VertexRef::parse(v.to_string()), v);
  EXPECT_EQ(VertexRef::parse("[]"), VertexRef{});
  EXPECT_LT((VertexRef{1, 2}), (VertexRef{1, 3}));
  EXPECT_LT((VertexRef{1}), (VertexRef{1, 0}));
  const EdgeKey e = EdgeKey::of({2}, {1, 5});
  EXPECT_EQ(e.lo, (VertexRef{1, 5}));
  EXPECT_EQ(e, EdgeKey::of({1, 5}, {2}));
}

TEST(Zoo, ConstructorsRejectBadDegree) {
  EXPECT_THROW(regular_tree(1), InvalidParameter);
  EXPECT_THROW(fig1_tree(2), InvalidParameter);
  EXPECT_THROW(fig1_graph(2), InvalidParameter);
  EXPECT_THROW(make_graph("family=nope"), InvalidParameter);
}

TEST(Zoo, SpecParsing) {
  const GraphSpec s = GraphSpec::parse("family=fig1_graph, d=3");
  EXPECT_EQ(s.family, "fig1_graph");
  EXPECT_EQ(s.params.at("d"), "3");
  EXPECT_EQ(GraphSpec::parse(s.to_string()).to_string(), s.to_string());
  EXPECT_EQ(make_graph(s)->name(), fig1_graph(3)->name());
  EXPECT_EQ(make_graph("family=cover, base=hexagonal_lattice")->degree_bound(), 3);
}

// Symmetric, loop-free, duplicate-free neighbor lists; degree <= bound, and
// exactly the bound in the interior of regular families.
TEST(Zoo, NeighborContract) {
  for (const auto& g : zoo()) {
    SCOPED_TRACE(g->name());
    const Ball b = ball(*g, 5);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto& v = b.vertices[i];
      const auto nb = g->neighbors(v);
      EXPECT_LE(static_cast<int>(nb.size()), g->degree_bound());
      if (g->is_regular()) EXPECT_EQ(static_cast<int>(nb.size()), g->degree_bound());
      std::set<VertexRef> uniq(nb.begin(), nb.end());
      EXPECT_EQ(uniq.size(), nb.size());
      EXPECT_EQ(uniq.count(v), 0u);
      for (const auto& u : nb) {
        EXPECT_TRUE(g->contains(u));
        const auto back = g->neighbors(u);
        EXPECT_NE(std::find(back.begin(), back.end(), v), back.end());
      }
    }
  }
}

TEST(Zoo, ClosedFormDistanceMatchesBfs) {
  for (const auto& g : zoo()) {
    if (!g->distance_from_root(g->root())) continue;
    SCOPED_TRACE(g->name());
    const Ball b = ball(*g, 6);
    for (std::size_t i = 0; i < b.size(); ++i)
      EXPECT_EQ(*g->distance_from_root(b.vertices[i]), b.dist[i]);
  }
}

TEST(Zoo, RegularTreeLevels) {
  const auto n = level_counts(ball(*regular_tree(3), 8));
  EXPECT_EQ(n[0], 1u);
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(n[k], 3u << (k - 1));
  const auto line = level_counts(ball(*regular_tree(2), 8));
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(line[k], 2u);
}

TEST(Zoo, Fig1TreeLevels) {
  for (int d : {3, 4, 5}) {
    const int n_max = d == 3 ? 12 : (d == 4 ? 10 : 8);
    const auto n = level_counts(ball(*fig1_tree(d), n_max));
    EXPECT_EQ(n[1], static_cast<std::size_t>(d));
    std::size_t expect = (d - 2) * (d + 1);
    for (int k = 2; k <= n_max; ++k, expect *= d - 1) EXPECT_EQ(n[k], expect) << "d=" << d << " k=" << k;
  }
  EXPECT_EQ(level_counts(ball(*fig1_tree(4), 2))[2], 10u);
}

TEST(Zoo, Fig1GraphHasOneTriangle) {
  const auto g = fig1_graph(3);
  const Ball b = ball(*g, 4);
  // one extra edge over a tree; its two ends are the root's deficient children
  EXPECT_EQ(b.edges.size(), b.size());
  const auto nb = g->neighbors(g->root());
  int triangles = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      const auto ni = g->neighbors(nb[i]);
      if (std::find(ni.begin(), ni.end(), nb[j]) != ni.end()) ++triangles;
    }
  EXPECT_EQ(triangles, 1);
  EXPECT_EQ(g->symmetry().kind, SymmetryKind::none_declared);
}

TEST(Zoo, LatticeDeclarations) {
  EXPECT_EQ(hexagonal_lattice()->symmetry().cycle_bound, 6);
  EXPECT_EQ(ladder()->symmetry().cycle_bound, 4);
  EXPECT_EQ(triangle_cactus()->symmetry().cycle_bound, 3);
  EXPECT_EQ(square_lattice()->symmetry().kind, SymmetryKind::transitive);
}

TEST(Zoo, CactusVertexOnOneTriangleAndOneBridge) {
  const auto g = triangle_cactus();
  const Ball b = ball(*g, 6);
  for (int i : b.interior()) {
    const auto& v = b.vertices[i];
    const auto nb = g->neighbors(v);
    int in_triangle = 0;
    for (const auto& u : nb)
      for (const auto& w : g->neighbors(u))
        if (w != v && std::find(nb.begin(), nb.end(), w) != nb.end()) ++in_triangle;
    // the two triangle mates see each other: 2 ordered hits, the bridge none
    EXPECT_EQ(in_triangle, 2) << v.to_string();
  }
}

TEST(Ball, SmallExamples) {
  EXPECT_EQ(ball(*regular_tree(3), 2).size(), 10u);
  const Ball sq = ball(*square_lattice(), 1);
  EXPECT_EQ(sq.size(), 5u);
  EXPECT_EQ(sq.edges.size(), 4u);
  for (int r = 0; r <= 12; ++r)
    EXPECT_EQ(ball(*square_lattice(), r).size(), static_cast<std::size_t>(2 * r * r + 2 * r + 1));
}

TEST(Ball, Deterministic) {
  for (const auto& g : zoo()) {
    const Ball a = ball(*g, 5), b = ball(*g, 5);
    EXPECT_EQ(a.vertices, b.vertices);
    EXPECT_EQ(a.edges, b.edges);
    EXPECT_EQ(a.dist, b.dist);
  }
}

TEST(Ball, InducedAndLabelled) {
  for (const auto& g : zoo()) {
    SCOPED_TRACE(g->name());
    const Ball b = ball(*g, 4);
    std::set<std::pair<int, int>> edges(b.edges.begin(), b.edges.end());
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (const auto& u : g->neighbors(b.vertices[i])) {
        const auto j = b.find(u);
        if (b.dist[i] < b.radius) ASSERT_TRUE(j.has_value());
        if (!j) continue;
        EXPECT_LE(std::abs(b.dist[i] - b.dist[*j]), 1);
        EXPECT_TRUE(edges.count({std::min<int>(i, *j), std::max<int>(i, *j)}));
      }
    }
  }
}

TEST(Ball, BudgetReportsLastRadius) {
  try {
    ball(*regular_tree(3), 30, 1000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    // radius 8 holds 766 vertices, radius 9 would hold 1534
    EXPECT_EQ(e.completed(), 8);
  }
}

TEST(Ball, EdgeListExport) {
  std::ostringstream out;
  write_edge_list(out, ball(*square_lattice(), 1));
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# radius 1 root [0,0]", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(Isomorphism, Examples) {
  const Ball t = ball(*regular_tree(3), 2);
  EXPECT_TRUE(rooted_ball_isomorphic(t, t));
  EXPECT_FALSE(rooted_ball_isomorphic(t, ball(*square_lattice(), 2)));
  const auto hex = hexagonal_lattice();
  EXPECT_TRUE(rooted_ball_isomorphic(ball_around(*hex, {0, 0}, 2), ball_around(*hex, {3, 2}, 2)));
  // same size, different shape: root of fig1_tree(3) vs a vertex of T_3
  EXPECT_FALSE(rooted_ball_isomorphic(ball(*fig1_tree(3), 2), ball(*regular_tree(3), 2)));
}

TEST(Girth, Examples) {
  EXPECT_FALSE(local_girth(*regular_tree(3), {0, 1, 1}, 20).has_value());
  EXPECT_EQ(local_girth(*hexagonal_lattice(), {2, -3}, 20), 6);
  EXPECT_EQ(local_girth(*square_lattice(), {0, 0}, 20), 4);
  EXPECT_EQ(local_girth(*triangle_cactus(), triangle_cactus()->root(), 20), 3);
  EXPECT_EQ(local_girth(*ladder(), ladder()->root(), 20), 4);
}

// Vertex k steps from the triangle: the shortest closed walk goes down to it,
// round the triangle and back, 2k + 3. Checked against that formula for every
// vertex of the radius-6 ball.
TEST(Girth, Fig1GraphFormula) {
  const auto g = fig1_graph(3);
  const Ball b = ball(*g, 6);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto& v = b.vertices[i];
    // distance to the triangle {root, [0], [1]}
    const int k = (v.size() >= 1 && v[0] <= 1) ? static_cast<int>(v.size()) - 1
                                               : static_cast<int>(v.size());
    const int k_eff = std::max(k, 0);
    EXPECT_EQ(local_girth(*g, v, 40), 2 * k_eff + 3) << v.to_string();
  }
  EXPECT_FALSE(local_girth(*g, {2, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 20).has_value());
}

TEST(Girth, InvariantOnTransitiveGraphs) {
  for (const auto& g : {square_lattice(), hexagonal_lattice(), triangle_cactus(), ladder()}) {
    const Ball b = ball(*g, 4);
    const auto ref = local_girth(*g, g->root(), 20);
    for (int i : b.interior()) EXPECT_EQ(local_girth(*g, b.vertices[i], 20), ref) << g->name();
  }
}

TEST(Girth, Scans) {
  const GirthScan hex = bounded_girth_scan(*hexagonal_lattice(), 5, 20);
  EXPECT_EQ(hex.max_girth_seen, 6);
  EXPECT_FALSE(hex.any_infinite);

  const GirthScan tree = bounded_girth_scan(*regular_tree(3), 5, 20);
  EXPECT_EQ(tree.exceeded, tree.scanned);
  EXPECT_FALSE(tree.max_girth_seen.has_value());

  int prev = 0;
  for (int r = 1; r <= 10; ++r) {
    const GirthScan s = bounded_girth_scan(*fig1_graph(3), r, 20);
    ASSERT_TRUE(s.max_girth_seen.has_value());
    EXPECT_GE(*s.max_girth_seen, prev);
    prev = *s.max_girth_seen;
    EXPECT_EQ(s.any_infinite, r >= 9) << "r=" << r;
  }
  EXPECT_EQ(prev, 19);
}

TEST(Orbits, Examples) {
  EXPECT_TRUE(orbit_consistency_check(*hexagonal_lattice(), 3).pass());
  EXPECT_TRUE(orbit_consistency_check(*triangle_cactus(), 3).pass());
  EXPECT_TRUE(orbit_consistency_check(*square_lattice(), 3).pass());
  EXPECT_TRUE(orbit_consistency_check(*regular_tree(3), 3).pass());
  EXPECT_THROW(orbit_consistency_check(*fig1_graph(3), 3), InvalidParameter);
}
