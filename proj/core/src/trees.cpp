#include "perclab/trees.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

#include "perclab/ball.hpp"
#include "perclab/errors.hpp"

namespace perclab {

namespace {

// Child lists of a rooted tree up to a given level, with the tree property
// checked wherever children are requested. With a closed-form distance the
// check is local: exactly one neighbor one level up (none at the root) and all
// others one level down, which is what makes every edge a parent edge.
// Otherwise the ball is materialized once and must have |E| = |V| - 1.
class TreeAccess {
 public:
  TreeAccess(const GraphModel& g, int depth) : g_(g) {
    closed_ = g.distance_from_root(g.root()).has_value();
    if (!closed_) {
      ball_ = ball(g, depth);
      if (ball_.edges.size() + 1 != ball_.size())
        throw NotATree(g.name() + " has a cycle within distance " + std::to_string(depth));
    }
  }

  void children(const VertexRef& v, int level, std::vector<VertexRef>& out) {
    out.clear();
    if (!closed_) {
      const int i = ball_.index.at(v);
      for (int j : ball_.adjacency[i])
        if (ball_.dist[j] == level + 1) out.push_back(ball_.vertices[j]);
      return;
    }
    nbrs_.clear();
    g_.neighbors(v, nbrs_);
    int parents = 0;
    for (auto& u : nbrs_) {
      const int lu = *g_.distance_from_root(u);
      if (lu == level - 1) {
        ++parents;
      } else if (lu == level + 1) {
        out.push_back(std::move(u));
      } else {
        throw NotATree(g_.name() + ": edge " + v.to_string() + " -- " + u.to_string() +
                       " joins vertices on the same level");
      }
    }
    if (parents != (level > 0 ? 1 : 0))
      throw NotATree(g_.name() + ": vertex " + v.to_string() + " has " +
                     std::to_string(parents) + " neighbors closer to the root");
  }

 private:
  const GraphModel& g_;
  bool closed_ = false;
  Ball ball_;
  std::vector<VertexRef> nbrs_;
};

// Child-class lists read off one representative per declared subtree class.
struct ClassTable {
  int root_class = 0;
  std::map<int, std::vector<int>> children;
};

std::optional<ClassTable> class_table(const GraphModel& g) {
  if (!g.distance_from_root(g.root()) || !g.subtree_class(g.root())) return std::nullopt;
  ClassTable t;
  t.root_class = *g.subtree_class(g.root());
  TreeAccess access(g, 0);
  std::vector<std::pair<VertexRef, int>> pending{{g.root(), 0}};
  std::set<int> seen{t.root_class};
  std::vector<VertexRef> kids;
  while (!pending.empty()) {
    auto [v, level] = std::move(pending.back());
    pending.pop_back();
    const int cls = *g.subtree_class(v);
    access.children(v, level, kids);
    auto& list = t.children[cls];
    for (const auto& k : kids) {
      const auto kc = g.subtree_class(k);
      if (!kc) return std::nullopt;
      list.push_back(*kc);
      if (seen.insert(*kc).second) pending.emplace_back(k, level + 1);
    }
  }
  return t;
}

struct VisitCounter {
  std::uint64_t budget;
  std::uint64_t used = 0;
  int completed = 0;
  void charge() {
    if (++used > budget)
      throw BudgetExceeded("tree walk exceeded " + std::to_string(budget) + " vertex visits",
                           completed);
  }
};

void count_levels(TreeAccess& access, const VertexRef& v, int level, int n_max,
                  std::vector<std::uint64_t>& sizes, VisitCounter& visits) {
  visits.charge();
  ++sizes[level];
  if (level == n_max) return;
  std::vector<VertexRef> kids;
  access.children(v, level, kids);
  for (const auto& k : kids) count_levels(access, k, level + 1, n_max, sizes, visits);
}

double cutset_streaming(TreeAccess& access, const VertexRef& v, int level, int depth,
                        double lambda, VisitCounter& visits) {
  visits.charge();
  const double own = std::pow(lambda, -level);
  if (level == depth) return own;
  std::vector<VertexRef> kids;
  access.children(v, level, kids);
  double sum = 0.0;
  for (const auto& k : kids) sum += cutset_streaming(access, k, level + 1, depth, lambda, visits);
  return level == 0 ? sum : std::min(own, sum);
}

double cutset_by_class(const ClassTable& t, int depth, double lambda) {
  std::map<int, double> cur;
  for (const auto& [c, _] : t.children) cur[c] = std::pow(lambda, -depth);
  for (int level = depth - 1; level >= 1; --level) {
    std::map<int, double> next;
    const double own = std::pow(lambda, -level);
    for (const auto& [c, kids] : t.children) {
      double sum = 0.0;
      for (int k : kids) sum += cur.at(k);
      next[c] = std::min(own, sum);
    }
    cur.swap(next);
  }
  double root = 0.0;
  for (int k : t.children.at(t.root_class)) root += cur.at(k);
  return root;
}

double geo_window(const std::vector<std::uint64_t>& sizes, int k) {
  return std::pow(static_cast<double>(sizes[k]), 1.0 / k);
}

}  // namespace

LevelProfile level_profile(const GraphModel& tree, int n_max, std::uint64_t budget) {
  if (n_max < 2) throw InvalidParameter("level_profile requires n_max >= 2");
  LevelProfile p;
  p.sizes.assign(n_max + 1, 0);
  if (auto table = class_table(tree)) {
    p.method = "subtree classes";
    std::map<int, std::uint64_t> counts{{table->root_class, 1}};
    p.sizes[0] = 1;
    for (int level = 1; level <= n_max; ++level) {
      std::map<int, std::uint64_t> next;
      bool overflow = false;
      for (const auto& [c, n] : counts)
        for (int k : table->children.at(c)) overflow |= __builtin_add_overflow(next[k], n, &next[k]);
      counts.swap(next);
      for (const auto& [c, n] : counts)
        overflow |= __builtin_add_overflow(p.sizes[level], n, &p.sizes[level]);
      if (overflow)
        throw BudgetExceeded("level size overflows 64 bits at level " + std::to_string(level),
                             level - 1);
    }
  } else {
    p.method = "enumeration";
    TreeAccess access(tree, n_max);
    VisitCounter visits{budget};
    count_levels(access, tree.root(), 0, n_max, p.sizes, visits);
  }
  p.window_start = std::max(1, (n_max + 1) / 2);
  p.gr_upper = 0.0;
  p.gr_lower = INFINITY;
  for (int k = p.window_start; k <= n_max; ++k) {
    const double g = geo_window(p.sizes, k);
    p.gr_upper = std::max(p.gr_upper, g);
    p.gr_lower = std::min(p.gr_lower, g);
  }
  return p;
}

CutsetEvaluation min_cutset_value(const GraphModel& tree, int depth, double lambda,
                                  std::uint64_t budget) {
  if (depth < 1) throw InvalidParameter("min_cutset_value requires depth >= 1");
  if (!(lambda > 1.0)) throw InvalidParameter("min_cutset_value requires lambda > 1");
  CutsetEvaluation e{lambda, depth, 0.0};
  if (auto table = class_table(tree)) {
    e.value = cutset_by_class(*table, depth, lambda);
  } else {
    TreeAccess access(tree, depth);
    VisitCounter visits{budget};
    e.value = cutset_streaming(access, tree.root(), 0, depth, lambda, visits);
  }
  return e;
}

std::string to_string(BranchSide side) {
  switch (side) {
    case BranchSide::below:
      return "below";
    case BranchSide::above:
      return "above";
    case BranchSide::undecided:
      return "undecided";
  }
  return "unknown";
}

namespace {

BranchingDecision decide(const GraphModel& tree, int depth, double lambda, double stable,
                         std::uint64_t budget) {
  BranchingDecision d;
  d.lambda = lambda;
  d.depths = {std::max(1, depth / 4), std::max(1, depth / 2), depth};
  for (int n : d.depths) d.values.push_back(min_cutset_value(tree, n, lambda, budget).value);
  for (std::size_t i = 0; i + 1 < d.values.size(); ++i)
    d.ratios.push_back(d.values[i] > 0.0 ? d.values[i + 1] / d.values[i] : 0.0);
  if (d.ratios.back() < stable)
    d.side = BranchSide::above;
  else if (d.ratios.front() >= stable)
    d.side = BranchSide::below;
  else
    d.side = BranchSide::undecided;
  return d;
}

}  // namespace

BranchingBracket branching_bracket(const GraphModel& tree, int depth, double lambda_tol,
                                   double stable_ratio, std::uint64_t budget) {
  if (depth < 8) throw InvalidParameter("branching_bracket requires depth >= 8");
  if (!(lambda_tol > 0.0)) throw InvalidParameter("branching_bracket requires lambda_tol > 0");
  BranchingBracket b;
  b.depth = depth;
  b.lambda_tol = lambda_tol;
  b.stable_ratio = stable_ratio;
  b.lo = 1.0;
  // br <= degree_bound - 1 for any tree of bounded degree.
  b.hi = std::max(2.0, static_cast<double>(tree.degree_bound()));
  std::set<double> undecided;
  bool converged = false;

  for (int step = 0; step < 60; ++step) {
    if (b.hi - b.lo <= lambda_tol) {
      converged = true;
      break;
    }
    for (auto it = undecided.begin(); it != undecided.end();)
      it = (*it <= b.lo || *it >= b.hi) ? undecided.erase(it) : std::next(it);
    double lambda;
    if (undecided.empty()) {
      lambda = 0.5 * (b.lo + b.hi);
    } else {
      const double gap_lo = *undecided.begin() - b.lo, gap_hi = b.hi - *undecided.rbegin();
      if (std::max(gap_lo, gap_hi) < lambda_tol / 4) break;
      lambda = gap_lo >= gap_hi ? 0.5 * (b.lo + *undecided.begin())
                                : 0.5 * (*undecided.rbegin() + b.hi);
    }
    BranchingDecision d = decide(tree, depth, lambda, stable_ratio, budget);
    if (d.side == BranchSide::below)
      b.lo = lambda;
    else if (d.side == BranchSide::above)
      b.hi = lambda;
    else
      undecided.insert(lambda);
    b.decision_log.push_back(std::move(d));
  }

  b.warning = !converged;
  char buf[200];
  if (converged) {
    std::snprintf(buf, sizeof buf, "width %.6g <= tolerance %.6g", b.hi - b.lo, lambda_tol);
  } else if (!undecided.empty()) {
    std::snprintf(buf, sizeof buf, "undecided lambda band [%.6g, %.6g] wider than tolerance",
                  *undecided.begin(), *undecided.rbegin());
  } else {
    std::snprintf(buf, sizeof buf, "step limit reached at width %.6g", b.hi - b.lo);
  }
  b.notes = buf;
  return b;
}

Interval pc_from_branching(const BranchingBracket& bracket) {
  if (!(bracket.lo >= 1.0) || !(bracket.hi > bracket.lo))
    throw InvalidParameter("pc_from_branching needs 1 <= lo < hi");
  return {1.0 / bracket.hi, 1.0 / bracket.lo};
}

namespace {

class Embedder {
 public:
  Embedder(const GraphModel& g, int depth) : g_(g), access_(g, depth) {
    use_classes_ = class_table(g).has_value();
  }

  // Whether the descendant subtree of x, cut `depth` levels down, embeds into
  // that of y.
  bool embeds(const VertexRef& x, int lx, const VertexRef& y, int ly, int depth) {
    if (depth == 0) return true;
    std::tuple<VertexRef, VertexRef, int> key;
    if (use_classes_)
      key = {VertexRef{*g_.subtree_class(x)}, VertexRef{*g_.subtree_class(y)}, depth};
    else
      key = {x, y, depth};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<VertexRef> a, b;
    access_.children(x, lx, a);
    access_.children(y, ly, b);
    bool ok = a.size() <= b.size();
    if (ok && !a.empty()) {
      std::vector<std::vector<char>> compat(a.size(), std::vector<char>(b.size()));
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
          compat[i][j] = embeds(a[i], lx + 1, b[j], ly + 1, depth - 1);
      ok = perfect_matching(compat, b.size());
    }
    memo_.emplace(key, ok);
    return ok;
  }

  void children(const VertexRef& v, int level, std::vector<VertexRef>& out) {
    access_.children(v, level, out);
  }

 private:
  // Kuhn's augmenting paths: can every left vertex be matched?
  static bool perfect_matching(const std::vector<std::vector<char>>& compat, std::size_t right) {
    std::vector<int> owner(right, -1);
    for (std::size_t i = 0; i < compat.size(); ++i) {
      std::vector<char> used(right, 0);
      if (!augment(compat, static_cast<int>(i), owner, used)) return false;
    }
    return true;
  }

  static bool augment(const std::vector<std::vector<char>>& compat, int i, std::vector<int>& owner,
                      std::vector<char>& used) {
    for (std::size_t j = 0; j < owner.size(); ++j) {
      if (!compat[i][j] || used[j]) continue;
      used[j] = 1;
      if (owner[j] < 0 || augment(compat, owner[j], owner, used)) {
        owner[j] = i;
        return true;
      }
    }
    return false;
  }

  const GraphModel& g_;
  TreeAccess access_;
  bool use_classes_ = false;
  std::map<std::tuple<VertexRef, VertexRef, int>, bool> memo_;
};

}  // namespace

SubperiodicityWitness subperiodicity_witness(const GraphModel& tree, int N, int check_depth,
                                             int ball_radius) {
  if (N < 0 || check_depth < 1 || ball_radius < 0)
    throw InvalidParameter("subperiodicity_witness needs N >= 0, check_depth >= 1, radius >= 0");
  SubperiodicityWitness w;
  w.N = N;
  w.checked_depth = check_depth;
  w.ball_radius = ball_radius;
  Embedder emb(tree, std::max(N, ball_radius) + check_depth);

  // Vertices by level, in BFS order, out to max(N, ball_radius).
  std::vector<std::vector<VertexRef>> levels{{tree.root()}};
  std::vector<VertexRef> kids;
  for (int level = 0; level < std::max(N, ball_radius); ++level) {
    levels.emplace_back();
    for (const auto& v : levels[level]) {
      emb.children(v, level, kids);
      levels.back().insert(levels.back().end(), kids.begin(), kids.end());
    }
  }

  for (int lx = 0; lx <= ball_radius; ++lx) {
    for (const auto& x : levels[lx]) {
      ++w.checked;
      bool matched = false;
      for (int ly = 0; ly <= N && !matched; ++ly)
        for (const auto& y : levels[ly])
          if (emb.embeds(x, lx, y, ly, check_depth)) {
            w.mapping.emplace_back(x, y);
            matched = true;
            break;
          }
      if (!matched) w.failures.push_back(x);
    }
  }
  w.found = w.failures.empty();
  w.notes = "finite-depth evidence: embeddings checked to " + std::to_string(check_depth) +
            " levels for " + std::to_string(w.checked) + " vertices";
  return w;
}

}  // namespace perclab
