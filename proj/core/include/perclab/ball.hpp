#pragma once

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/percolation.hpp"

namespace perclab {

// Radius-r ball around a center, materialized by BFS. Vertices are stored in
// BFS order (neighbor lists visited in the model's order), so two builds with
// the same arguments are identical. All graph edges between ball vertices are
// present, including those inside the boundary shell.
struct Ball {
  int radius = 0;
  VertexRef center;
  std::vector<VertexRef> vertices;
  std::vector<int> dist;
  // Index pairs (i < j), sorted.
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adjacency;
  std::unordered_map<VertexRef, int> index;

  std::size_t size() const { return vertices.size(); }
  std::vector<int> boundary() const;
  std::vector<int> interior() const;  // dist < radius
  std::optional<int> find(const VertexRef& v) const;
  int degree(int i) const { return static_cast<int>(adjacency[i].size()); }
};

// Throws BudgetExceeded (with the last complete radius) when the ball would
// hold more than `vertex_budget` vertices.
Ball ball(const GraphModel& graph, int radius, std::size_t vertex_budget = kDefaultVertexBudget);
Ball ball_around(const GraphModel& graph, const VertexRef& center, int radius,
                 std::size_t vertex_budget = kDefaultVertexBudget);

// Edge-list export: header "# radius <r> root <encoding>", then one line per
// edge with two canonical vertex encodings.
void write_edge_list(std::ostream& out, const Ball& b);

// Root-preserving isomorphism of two balls (exact backtracking search).
bool rooted_ball_isomorphic(const Ball& a, const Ball& b);

// Length of the shortest closed non-backtracking walk through v (cycles that
// are not simple included, e.g. a path out to a triangle and back), or nullopt
// when none of length <= cap exists.
std::optional<int> local_girth(const GraphModel& graph, const VertexRef& v, int cap);

struct GirthScan {
  int radius = 0;
  int cap = 0;
  std::size_t scanned = 0;
  std::optional<int> max_girth_seen;   // over vertices with a cycle <= cap
  bool any_infinite = false;           // some vertex has no cycle <= cap
  std::size_t exceeded = 0;            // number of such vertices
  std::vector<int> distinct_values;    // sorted finite girths observed
};

// Local girth of every vertex of the radius-r ball (boundary shell included).
GirthScan bounded_girth_scan(const GraphModel& graph, int radius, int cap);

struct OrbitReport {
  int radius = 0;
  std::size_t checked = 0;
  std::vector<VertexRef> violations;
  bool pass() const { return violations.empty(); }
};

// Each interior vertex's radius-r ball must be rooted-isomorphic to the ball
// of some declared orbit representative. A necessary check of the symmetry
// declaration only. Throws InvalidParameter for none_declared graphs.
OrbitReport orbit_consistency_check(const GraphModel& graph, int radius);

}  // namespace perclab
