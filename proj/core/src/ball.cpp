#include "perclab/ball.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "perclab/errors.hpp"

namespace perclab {

std::vector<int> Ball::boundary() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (dist[i] == radius) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Ball::interior() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (dist[i] < radius) out.push_back(static_cast<int>(i));
  return out;
}

std::optional<int> Ball::find(const VertexRef& v) const {
  auto it = index.find(v);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Ball ball(const GraphModel& graph, int radius, std::size_t vertex_budget) {
  return ball_around(graph, graph.root(), radius, vertex_budget);
}

Ball ball_around(const GraphModel& graph, const VertexRef& center, int radius,
                 std::size_t vertex_budget) {
  if (radius < 0) throw InvalidParameter("ball radius must be >= 0");
  Ball b;
  b.radius = radius;
  b.center = center;
  b.vertices.push_back(center);
  b.dist.push_back(0);
  b.index.emplace(center, 0);

  std::vector<VertexRef> nbrs;
  for (std::size_t head = 0; head < b.vertices.size(); ++head) {
    const int d = b.dist[head];
    if (d == radius) continue;
    nbrs.clear();
    graph.neighbors(b.vertices[head], nbrs);
    for (auto& u : nbrs) {
      if (b.index.contains(u)) continue;
      if (b.vertices.size() >= vertex_budget)
        throw BudgetExceeded("ball exceeds vertex budget of " + std::to_string(vertex_budget),
                             d);
      b.index.emplace(u, static_cast<int>(b.vertices.size()));
      b.vertices.push_back(std::move(u));
      b.dist.push_back(d + 1);
    }
  }

  b.adjacency.assign(b.vertices.size(), {});
  for (std::size_t i = 0; i < b.vertices.size(); ++i) {
    nbrs.clear();
    graph.neighbors(b.vertices[i], nbrs);
    for (const auto& u : nbrs) {
      auto it = b.index.find(u);
      if (it == b.index.end()) continue;
      const int j = it->second;
      b.adjacency[i].push_back(j);
      if (static_cast<int>(i) < j) b.edges.emplace_back(static_cast<int>(i), j);
    }
  }
  std::sort(b.edges.begin(), b.edges.end());
  return b;
}

void write_edge_list(std::ostream& out, const Ball& b) {
  out << "# radius " << b.radius << " root " << b.center.to_string() << '\n';
  for (auto [i, j] : b.edges) {
    const auto& u = b.vertices[i];
    const auto& v = b.vertices[j];
    if (u < v)
      out << u.to_string() << ' ' << v.to_string() << '\n';
    else
      out << v.to_string() << ' ' << u.to_string() << '\n';
  }
}

namespace {

// Color refinement run jointly on both balls so colors are comparable.
std::pair<std::vector<int>, std::vector<int>> refine_colors(const Ball& a, const Ball& b) {
  const std::size_t n = a.size();
  std::vector<int> ca(n), cb(n);
  {
    std::map<std::pair<int, int>, int> ids;
    auto id = [&](int d, int deg) {
      return ids.emplace(std::pair{d, deg}, static_cast<int>(ids.size())).first->second;
    };
    for (std::size_t i = 0; i < n; ++i) ca[i] = id(a.dist[i], a.degree(static_cast<int>(i)));
    for (std::size_t i = 0; i < n; ++i) cb[i] = id(b.dist[i], b.degree(static_cast<int>(i)));
  }
  std::size_t classes = 0;
  for (;;) {
    std::map<std::vector<int>, int> ids;
    auto signature = [](const Ball& g, const std::vector<int>& c, std::size_t i) {
      std::vector<int> sig{c[i]};
      for (int j : g.adjacency[i]) sig.push_back(c[j]);
      std::sort(sig.begin() + 1, sig.end());
      return sig;
    };
    std::vector<int> na(n), nb(n);
    for (std::size_t i = 0; i < n; ++i)
      na[i] = ids.emplace(signature(a, ca, i), static_cast<int>(ids.size())).first->second;
    for (std::size_t i = 0; i < n; ++i)
      nb[i] = ids.emplace(signature(b, cb, i), static_cast<int>(ids.size())).first->second;
    ca.swap(na);
    cb.swap(nb);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {ca, cb};
}

struct IsoSearch {
  const Ball& a;
  const Ball& b;
  const std::vector<int>& ca;
  const std::vector<int>& cb;
  std::vector<std::vector<int>> adj_b_sorted;
  std::vector<int> map_ab, map_ba;

  bool adjacent_b(int x, int y) const {
    const auto& l = adj_b_sorted[x];
    return std::binary_search(l.begin(), l.end(), y);
  }

  bool consistent(int i, int j) const {
    // Mapped neighbors of i must land on neighbors of j, and the number of
    // already-mapped neighbors must agree on both sides.
    int mapped_a = 0, mapped_b = 0;
    for (int k : a.adjacency[i]) {
      if (map_ab[k] < 0) continue;
      ++mapped_a;
      if (!adjacent_b(j, map_ab[k])) return false;
    }
    for (int k : b.adjacency[j])
      if (map_ba[k] >= 0) ++mapped_b;
    return mapped_a == mapped_b;
  }

  bool extend(std::size_t pos) {
    // BFS order: vertex pos has an earlier-mapped neighbor unless it is the root.
    if (pos == a.size()) return true;
    const int i = static_cast<int>(pos);
    std::vector<int> candidates;
    int anchor = -1;
    for (int k : a.adjacency[i])
      if (map_ab[k] >= 0) {
        anchor = map_ab[k];
        break;
      }
    if (anchor < 0) {
      for (std::size_t j = 0; j < b.size(); ++j) candidates.push_back(static_cast<int>(j));
    } else {
      candidates = b.adjacency[anchor];
    }
    for (int j : candidates) {
      if (map_ba[j] >= 0 || cb[j] != ca[i] || b.dist[j] != a.dist[i]) continue;
      if (!consistent(i, j)) continue;
      map_ab[i] = j;
      map_ba[j] = i;
      if (extend(pos + 1)) return true;
      map_ab[i] = -1;
      map_ba[j] = -1;
    }
    return false;
  }
};

}  // namespace

bool rooted_ball_isomorphic(const Ball& a, const Ball& b) {
  if (a.radius != b.radius) throw InvalidParameter("rooted_ball_isomorphic needs equal radii");
  if (a.size() != b.size() || a.edges.size() != b.edges.size()) return false;
  auto [ca, cb] = refine_colors(a, b);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  IsoSearch search{a, b, ca, cb, {}, {}, {}};
  search.adj_b_sorted = b.adjacency;
  for (auto& l : search.adj_b_sorted) std::sort(l.begin(), l.end());
  search.map_ab.assign(a.size(), -1);
  search.map_ba.assign(b.size(), -1);
  // Roots are index 0 in both balls; pin them first.
  if (ca[0] != cb[0]) return false;
  search.map_ab[0] = 0;
  search.map_ba[0] = 0;
  return search.extend(1);
}

std::optional<int> local_girth(const GraphModel& graph, const VertexRef& v, int cap) {
  if (cap < 3) throw InvalidParameter("local_girth cap must be >= 3");
  // BFS over non-backtracking states (vertex, predecessor). A closed walk of
  // length L splits at its midpoint w into two such walks from v that reach w
  // through different predecessors, so it is enough to keep, per vertex, the
  // first arrival and the first arrival through another predecessor.
  struct State {
    VertexRef at, prev;
    bool operator==(const State&) const = default;
  };
  struct StateHash {
    std::size_t operator()(const State& s) const {
      const std::size_t a = std::hash<VertexRef>{}(s.at);
      return a ^ (std::hash<VertexRef>{}(s.prev) + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    }
  };
  struct Arrival {
    int dist1 = -1, dist2 = -1;
    VertexRef prev1;
  };
  std::unordered_set<State, StateHash> seen;
  std::unordered_map<VertexRef, Arrival> arrivals;
  std::optional<int> best;
  auto arrive = [&](const VertexRef& w, const VertexRef& prev, int dist) {
    Arrival& a = arrivals[w];
    if (a.dist1 < 0) {
      a.dist1 = dist;
      a.prev1 = prev;
    } else if (a.dist2 < 0 && !(prev == a.prev1)) {
      a.dist2 = dist;
      const int length = a.dist1 + a.dist2;
      if (!best || length < *best) best = length;
    }
  };

  std::vector<State> layer, next;
  std::vector<VertexRef> nbrs;
  graph.neighbors(v, nbrs);
  for (const auto& u : nbrs)
    if (seen.insert({u, v}).second) {
      layer.push_back({u, v});
      arrive(u, v, 1);
    }
  // Once depth t is complete every closed walk of length <= 2t has been seen.
  for (int depth = 1; !layer.empty(); ++depth) {
    if (best && *best <= 2 * depth) break;
    if (2 * depth >= cap) break;
    next.clear();
    for (const auto& s : layer) {
      nbrs.clear();
      graph.neighbors(s.at, nbrs);
      for (const auto& b : nbrs) {
        if (b == s.prev) continue;
        State t{b, s.at};
        if (!seen.insert(t).second) continue;
        arrive(b, s.at, depth + 1);
        next.push_back(std::move(t));
      }
    }
    layer.swap(next);
  }
  if (best && *best <= cap) return best;
  return std::nullopt;
}

GirthScan bounded_girth_scan(const GraphModel& graph, int radius, int cap) {
  if (cap < 3) throw InvalidParameter("bounded_girth_scan cap must be >= 3");
  const Ball b = ball(graph, radius);
  GirthScan scan;
  scan.radius = radius;
  scan.cap = cap;
  std::set<int> values;
  for (const auto& v : b.vertices) {
    ++scan.scanned;
    auto g = local_girth(graph, v, cap);
    if (!g) {
      scan.any_infinite = true;
      ++scan.exceeded;
      continue;
    }
    values.insert(*g);
    if (!scan.max_girth_seen || *g > *scan.max_girth_seen) scan.max_girth_seen = g;
  }
  scan.distinct_values.assign(values.begin(), values.end());
  return scan;
}

OrbitReport orbit_consistency_check(const GraphModel& graph, int radius) {
  const SymmetryDecl sym = graph.symmetry();
  if (sym.kind == SymmetryKind::none_declared)
    throw InvalidParameter("orbit_consistency_check: " + graph.name() +
                           " declares no symmetry");
  if (sym.orbit_reps.empty()) throw InvalidParameter("symmetry declaration has no orbit reps");
  std::vector<Ball> reps;
  for (const auto& r : sym.orbit_reps) reps.push_back(ball_around(graph, r, radius));

  OrbitReport report;
  report.radius = radius;
  const Ball around_root = ball(graph, radius);
  for (int i : around_root.interior()) {
    ++report.checked;
    const Ball local = ball_around(graph, around_root.vertices[i], radius);
    const bool matched = std::any_of(reps.begin(), reps.end(), [&](const Ball& rep) {
      return rooted_ball_isomorphic(local, rep);
    });
    if (!matched) report.violations.push_back(around_root.vertices[i]);
  }
  return report;
}

}  // namespace perclab
