#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/percolation.hpp"

namespace perclab {

// Vertex visits allowed when a tree has to be walked vertex by vertex (no
// declared subtree classes).
inline constexpr std::uint64_t kDefaultTreeVisitBudget = 100'000'000;

// Level sizes |T_0|..|T_n| and growth-rate estimates taken over the tail
// window k in [ceil(n/2), n] only.
struct LevelProfile {
  std::vector<std::uint64_t> sizes;
  double gr_upper = 0.0;  // max of |T_k|^(1/k) over the window
  double gr_lower = 0.0;  // min of |T_k|^(1/k) over the window
  int window_start = 0;
  std::string method;  // "subtree classes" or "enumeration"
};

// Throws NotATree if a cycle shows up, BudgetExceeded if enumeration runs out.
LevelProfile level_profile(const GraphModel& tree, int n_max,
                           std::uint64_t budget = kDefaultTreeVisitBudget);

// inf over cutsets inside the depth-`depth` truncation of sum lambda^{-|e|},
// where |e| is the level of the edge's lower endpoint. Leaf-to-root recursion:
// a vertex at level `depth` contributes c(e_v); any other vertex contributes
// min(c(e_v), sum over its children); the root returns the sum over children.
struct CutsetEvaluation {
  double lambda = 0.0;
  int depth = 0;
  double value = 0.0;
};

CutsetEvaluation min_cutset_value(const GraphModel& tree, int depth, double lambda,
                                  std::uint64_t budget = kDefaultTreeVisitBudget);

enum class BranchSide { below, above, undecided };
std::string to_string(BranchSide side);

struct BranchingDecision {
  double lambda = 0.0;
  std::vector<int> depths;      // depth/4, depth/2, depth
  std::vector<double> values;   // min cutset value at each depth
  std::vector<double> ratios;   // values[i + 1] / values[i]
  BranchSide side = BranchSide::undecided;
};

struct BranchingBracket {
  double lo = 1.0;
  double hi = 0.0;
  int depth = 0;
  double lambda_tol = 0.0;
  double stable_ratio = 0.9;
  std::vector<BranchingDecision> decision_log;
  // Set when an undecided lambda band kept the bracket wider than lambda_tol.
  bool warning = false;
  std::string notes;
};

// Bisection over lambda starting from [1, degree_bound]. A lambda is "below"
// br when both successive value ratios are at least `stable_ratio`, "above"
// when the deepest ratio falls under it, and undecided when the values first
// drop and then level off.
BranchingBracket branching_bracket(const GraphModel& tree, int depth, double lambda_tol,
                                   double stable_ratio = 0.9,
                                   std::uint64_t budget = kDefaultTreeVisitBudget);

// p_c = 1 / br transferred to the bracket: [1 / hi, 1 / lo].
Interval pc_from_branching(const BranchingBracket& bracket);

struct SubperiodicityWitness {
  int N = 0;
  int checked_depth = 0;
  int ball_radius = 0;
  bool found = false;
  std::size_t checked = 0;
  // (x, f(x)) for every x in the ball that embeds somewhere within distance N.
  std::vector<std::pair<VertexRef, VertexRef>> mapping;
  // Vertices whose descendant subtree embeds into no candidate target.
  std::vector<VertexRef> failures;
  std::string notes;
};

// For each x at distance <= ball_radius, looks for f(x) at distance <= N whose
// descendant subtree admits an injective adjacency-preserving embedding of the
// descendant subtree of x, both cut at check_depth levels. Embeddings are
// built by recursive bipartite matching of children. Finite-depth evidence.
SubperiodicityWitness subperiodicity_witness(const GraphModel& tree, int N, int check_depth,
                                             int ball_radius);

}  // namespace perclab
