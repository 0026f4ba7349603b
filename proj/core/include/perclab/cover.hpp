#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

// Vertex of the universal cover: a non-backtracking path <x_0, ..., x_n> in
// the base graph starting at the base vertex. Encoded into a VertexRef as the
// concatenation of (length, payload...) records, one per path entry.
using CoverPath = std::vector<VertexRef>;

VertexRef encode_cover_path(const CoverPath& path);
CoverPath decode_cover_path(const VertexRef& node);

// Lazy universal cover of `base` rooted at the path <base_vertex>. Two nodes
// are adjacent iff one extends the other by a single base edge.
//
// `allow_backtracking` builds the corrupted cover used as a negative control:
// every walk (not just non-backtracking paths) becomes a node, so a node's
// parent and its reversal extension project to the same base vertex.
class CoverModel final : public GraphModel {
 public:
  CoverModel(GraphPtr base, VertexRef base_vertex, bool allow_backtracking = false);

  std::string name() const override;
  VertexRef root() const override { return root_; }
  using GraphModel::neighbors;
  void neighbors(const VertexRef& v, std::vector<VertexRef>& out) const override;
  int degree_bound() const override { return base_->degree_bound(); }
  bool is_regular() const override { return base_->is_regular() && !allow_backtracking_; }
  SymmetryDecl symmetry() const override;
  std::optional<int> distance_from_root(const VertexRef& v) const override;
  bool contains(const VertexRef& v) const override;

  const GraphModel& base() const { return *base_; }
  const GraphPtr& base_ptr() const { return base_; }
  const VertexRef& base_vertex() const { return base_vertex_; }
  bool allows_backtracking() const { return allow_backtracking_; }

 private:
  GraphPtr base_;
  VertexRef base_vertex_;
  VertexRef root_;
  bool allow_backtracking_;
};

using CoverPtr = std::shared_ptr<const CoverModel>;

CoverPtr universal_cover(GraphPtr base);
CoverPtr universal_cover(GraphPtr base, VertexRef base_vertex);

// The covering map: a path projects to its last entry.
VertexRef project(const VertexRef& node);

using Projection = std::function<VertexRef(const VertexRef&)>;

// Negative control for the Lipschitz check: paths with an odd number of steps
// project to their second-to-last entry instead of their last.
VertexRef skip_odd_step_projection(const VertexRef& node);

struct VerificationReport {
  std::string property;
  int radius = 0;
  bool pass = true;
  std::string method;
  std::size_t checked = 0;
  std::size_t failures = 0;
  // First counterexample found: one node (lifting, fibres) or a pair (Lipschitz).
  std::vector<VertexRef> counterexample;
  std::string detail;
  // Extremal statistic, e.g. the largest nearest-fibre-mate distance R.
  std::optional<int> extremal;
  std::string extremal_name;
};

// Default cap on unordered node pairs for the literal all-pairs Lipschitz
// comparison; larger balls are checked edge by edge (see verify_lipschitz).
inline constexpr std::size_t kLipschitzPairBudget = 50'000'000;

// d_base(pi(x), pi(y)) <= d_cover(x, y) over the cover ball of `radius`.
// Balls with at most `pair_budget` pairs are checked pair by pair. Larger
// balls are checked on every ball edge, which is equivalent: geodesics between
// nodes of a ball in a tree stay inside the ball, and a map is 1-Lipschitz for
// path metrics iff it is on edges.
VerificationReport verify_lipschitz(const CoverModel& cover, int radius,
                                    const Projection& projection = project,
                                    std::size_t pair_budget = kLipschitzPairBudget);

// Every interior node x and base neighbor u of pi(x): exactly one cover
// neighbor of x projects to u (and none projects elsewhere).
VerificationReport verify_strong_lifting(const CoverModel& cover, int radius);

// Every interior node x has some y != x with pi(y) = pi(x) and
// d_cover(x, y) <= r_cap. Reports the largest nearest-mate distance.
VerificationReport verify_fibres(const CoverModel& cover, int radius, int r_cap);

// Acyclicity (edges = vertices - 1, connected) of the materialized cover ball
// and, for regular bases, degree d at every interior node.
VerificationReport verify_tree_structure(const CoverModel& cover, int radius);

// Every base vertex within `radius` of the base vertex is the projection of
// some cover node within `radius` of the cover root.
VerificationReport verify_projection_surjective(const CoverModel& cover, int radius);

}  // namespace perclab
