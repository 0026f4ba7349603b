#include "perclab/cover.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "perclab/ball.hpp"
#include "perclab/errors.hpp"

namespace perclab {

namespace {

// Start offsets of the records in an encoded path.
std::vector<std::size_t> record_offsets(const VertexRef& node) {
  std::vector<std::size_t> offsets;
  const auto& p = node.payload();
  std::size_t pos = 0;
  while (pos < p.size()) {
    if (p[pos] < 0 || pos + 1 + static_cast<std::size_t>(p[pos]) > p.size())
      throw InvalidParameter("malformed cover node " + node.to_string());
    offsets.push_back(pos);
    pos += 1 + static_cast<std::size_t>(p[pos]);
  }
  return offsets;
}

VertexRef record_at(const VertexRef& node, std::size_t offset) {
  const auto& p = node.payload();
  const auto len = static_cast<std::size_t>(p[offset]);
  return VertexRef(Payload(p.begin() + offset + 1, p.begin() + offset + 1 + len));
}

void append_record(Payload& out, const VertexRef& v) {
  out.push_back(static_cast<std::int64_t>(v.size()));
  out.insert(out.end(), v.payload().begin(), v.payload().end());
}

}  // namespace

VertexRef encode_cover_path(const CoverPath& path) {
  Payload out;
  for (const auto& v : path) append_record(out, v);
  return VertexRef(std::move(out));
}

CoverPath decode_cover_path(const VertexRef& node) {
  CoverPath path;
  for (std::size_t off : record_offsets(node)) path.push_back(record_at(node, off));
  return path;
}

VertexRef project(const VertexRef& node) {
  const auto offsets = record_offsets(node);
  if (offsets.empty()) throw InvalidParameter("empty cover node");
  return record_at(node, offsets.back());
}

VertexRef skip_odd_step_projection(const VertexRef& node) {
  const auto offsets = record_offsets(node);
  if (offsets.empty()) throw InvalidParameter("empty cover node");
  const std::size_t steps = offsets.size() - 1;
  if (steps % 2 == 1) return record_at(node, offsets[offsets.size() - 2]);
  return record_at(node, offsets.back());
}

CoverModel::CoverModel(GraphPtr base, VertexRef base_vertex, bool allow_backtracking)
    : base_(std::move(base)), base_vertex_(std::move(base_vertex)),
      allow_backtracking_(allow_backtracking) {
  if (!base_) throw InvalidParameter("cover needs a base graph");
  if (!base_->contains(base_vertex_))
    throw InvalidParameter("base vertex " + base_vertex_.to_string() + " is not in " +
                           base_->name());
  root_ = encode_cover_path({base_vertex_});
}

std::string CoverModel::name() const {
  std::string base_name = base_->name();
  const std::string prefix = "family=";
  if (base_name.rfind(prefix, 0) == 0) base_name = base_name.substr(prefix.size());
  return std::string("family=cover") + (allow_backtracking_ ? "_backtracking" : "") +
         ", base=" + base_name;
}

void CoverModel::neighbors(const VertexRef& v, std::vector<VertexRef>& out) const {
  const auto offsets = record_offsets(v);
  const VertexRef last = record_at(v, offsets.back());
  std::optional<VertexRef> previous;
  if (offsets.size() >= 2) {
    previous = record_at(v, offsets[offsets.size() - 2]);
    out.push_back(VertexRef(Payload(v.payload().begin(), v.payload().begin() + offsets.back())));
  }
  std::vector<VertexRef> base_nbrs;
  base_->neighbors(last, base_nbrs);
  for (const auto& u : base_nbrs) {
    if (!allow_backtracking_ && previous && u == *previous) continue;
    Payload extended = v.payload();
    append_record(extended, u);
    out.emplace_back(std::move(extended));
  }
}

SymmetryDecl CoverModel::symmetry() const {
  // The cover of a d-regular base is the d-regular tree.
  if (base_->is_regular() && !allow_backtracking_) return {SymmetryKind::transitive, {root_}, {}};
  return {};
}

std::optional<int> CoverModel::distance_from_root(const VertexRef& v) const {
  return static_cast<int>(record_offsets(v).size()) - 1;
}

bool CoverModel::contains(const VertexRef& v) const {
  CoverPath path;
  try {
    path = decode_cover_path(v);
  } catch (const InvalidParameter&) {
    return false;
  }
  if (path.empty() || path.front() != base_vertex_) return false;
  std::vector<VertexRef> nbrs;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!base_->contains(path[i + 1])) return false;
    nbrs.clear();
    base_->neighbors(path[i], nbrs);
    if (std::find(nbrs.begin(), nbrs.end(), path[i + 1]) == nbrs.end()) return false;
    if (!allow_backtracking_ && i >= 1 && path[i + 1] == path[i - 1]) return false;
  }
  return true;
}

CoverPtr universal_cover(GraphPtr base) {
  auto root = base->root();
  return universal_cover(std::move(base), std::move(root));
}

CoverPtr universal_cover(GraphPtr base, VertexRef base_vertex) {
  return std::make_shared<CoverModel>(std::move(base), std::move(base_vertex));
}

namespace {

// Graph distances from `source`, truncated at `max_depth`, over all vertices
// of the base graph (not just a ball).
std::unordered_map<VertexRef, int> bounded_distances(const GraphModel& g, const VertexRef& source,
                                                     int max_depth) {
  std::unordered_map<VertexRef, int> dist{{source, 0}};
  std::vector<VertexRef> layer{source}, next, nbrs;
  for (int d = 0; d < max_depth && !layer.empty(); ++d) {
    next.clear();
    for (const auto& v : layer) {
      nbrs.clear();
      g.neighbors(v, nbrs);
      for (auto& u : nbrs)
        if (dist.emplace(u, d + 1).second) next.push_back(std::move(u));
    }
    layer.swap(next);
  }
  return dist;
}

std::vector<int> distances_in_ball(const Ball& b, int source) {
  std::vector<int> dist(b.size(), -1);
  std::vector<int> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (int u : b.adjacency[v])
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }
  return dist;
}

bool base_adjacent_or_equal(const GraphModel& base, const VertexRef& a, const VertexRef& b) {
  if (a == b) return true;
  auto nbrs = base.neighbors(a);
  return std::find(nbrs.begin(), nbrs.end(), b) != nbrs.end();
}

}  // namespace

VerificationReport verify_lipschitz(const CoverModel& cover, int radius,
                                    const Projection& projection, std::size_t pair_budget) {
  VerificationReport report;
  report.property = "lipschitz";
  report.radius = radius;
  const Ball cb = ball(cover, radius);
  const GraphModel& base = cover.base();
  const std::size_t n = cb.size();

  std::vector<VertexRef> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = projection(cb.vertices[i]);

  auto fail = [&](int i, int j, const std::string& detail) {
    ++report.failures;
    if (report.pass) {
      report.pass = false;
      report.counterexample = {cb.vertices[i], cb.vertices[j]};
      report.detail = detail;
    }
  };

  const std::size_t pairs = n * (n - 1) / 2;
  if (pairs > pair_budget) {
    report.method = "edges (geodesic reduction)";
    for (auto [i, j] : cb.edges) {
      ++report.checked;
      if (!base_adjacent_or_equal(base, proj[i], proj[j]))
        fail(i, j, "adjacent cover nodes project to base vertices at distance > 1");
    }
    return report;
  }

  report.method = "all pairs";
  // Distances inside the base ball around the base vertex over-estimate true
  // distances, so "ball distance <= cover distance" already certifies a pair.
  // Pairs failing that bound are re-checked with an unrestricted BFS.
  const Ball bb = ball_around(base, cover.base_vertex(), radius);
  std::vector<int> proj_idx(n, -1);
  std::unordered_map<int, int> row_of;
  for (std::size_t i = 0; i < n; ++i)
    if (auto k = bb.find(proj[i])) {
      proj_idx[i] = *k;
      row_of.emplace(*k, 0);
    }
  std::vector<std::vector<int>> ball_dist;
  {
    int row = 0;
    for (auto& [k, r] : row_of) {
      r = row++;
      ball_dist.push_back(distances_in_ball(bb, k));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<int> dcover = distances_in_ball(cb, static_cast<int>(i));
    std::optional<std::unordered_map<VertexRef, int>> exact;
    for (std::size_t j = i + 1; j < n; ++j) {
      ++report.checked;
      const int limit = dcover[j];
      if (proj_idx[i] >= 0 && proj_idx[j] >= 0) {
        const int db = ball_dist[row_of.at(proj_idx[i])][proj_idx[j]];
        if (db >= 0 && db <= limit) continue;
      }
      if (!exact) exact = bounded_distances(base, proj[i], 2 * radius);
      auto it = exact->find(proj[j]);
      if (it == exact->end() || it->second > limit)
        fail(static_cast<int>(i), static_cast<int>(j),
             "d_base(pi(x), pi(y)) > d_cover(x, y) = " + std::to_string(limit));
    }
  }
  return report;
}

VerificationReport verify_strong_lifting(const CoverModel& cover, int radius) {
  if (radius < 1) throw InvalidParameter("verify_strong_lifting requires radius >= 1");
  VerificationReport report;
  report.property = "strong_lifting";
  report.radius = radius;
  report.method = "exhaustive over interior nodes";
  const Ball cb = ball(cover, radius);
  const GraphModel& base = cover.base();
  std::vector<VertexRef> cover_nbrs, base_nbrs;
  for (int i : cb.interior()) {
    ++report.checked;
    const VertexRef& x = cb.vertices[i];
    const VertexRef px = project(x);
    cover_nbrs.clear();
    cover.neighbors(x, cover_nbrs);
    base_nbrs.clear();
    base.neighbors(px, base_nbrs);
    std::unordered_map<VertexRef, int> hits;
    for (const auto& u : base_nbrs) hits.emplace(u, 0);
    std::string problem;
    for (const auto& y : cover_nbrs) {
      auto it = hits.find(project(y));
      if (it == hits.end())
        problem = "cover neighbor projects outside N(pi(x))";
      else
        ++it->second;
    }
    for (const auto& u : base_nbrs)
      if (hits[u] != 1)
        problem = std::to_string(hits[u]) + " cover neighbors project to " + u.to_string();
    if (!problem.empty()) {
      ++report.failures;
      if (report.pass) {
        report.pass = false;
        report.counterexample = {x};
        report.detail = problem;
      }
    }
  }
  return report;
}

VerificationReport verify_fibres(const CoverModel& cover, int radius, int r_cap) {
  if (r_cap < 1) throw InvalidParameter("verify_fibres requires R_cap >= 1");
  VerificationReport report;
  report.property = "fibres";
  report.radius = radius;
  report.method = "BFS from every interior node up to R_cap";
  report.extremal_name = "max nearest fibre-mate distance";
  const Ball cb = ball(cover, radius);
  std::vector<VertexRef> layer, next, nbrs;
  for (int i : cb.interior()) {
    ++report.checked;
    const VertexRef& x = cb.vertices[i];
    const VertexRef px = project(x);
    std::unordered_set<VertexRef> seen{x};
    layer.assign(1, x);
    std::optional<int> found;
    for (int d = 1; d <= r_cap && !found && !layer.empty(); ++d) {
      next.clear();
      for (const auto& v : layer) {
        nbrs.clear();
        cover.neighbors(v, nbrs);
        for (auto& u : nbrs) {
          if (!seen.insert(u).second) continue;
          if (project(u) == px) found = d;
          next.push_back(std::move(u));
        }
      }
      layer.swap(next);
    }
    if (!found) {
      ++report.failures;
      if (report.pass) {
        report.pass = false;
        report.counterexample = {x};
        report.detail = "no fibre-mate within distance " + std::to_string(r_cap);
      }
      continue;
    }
    if (!report.extremal || *found > *report.extremal) report.extremal = found;
  }
  return report;
}

VerificationReport verify_tree_structure(const CoverModel& cover, int radius) {
  VerificationReport report;
  report.property = "tree_structure";
  report.radius = radius;
  report.method = "edge count, connectivity, interior degrees";
  const Ball cb = ball(cover, radius);
  report.checked = cb.size();
  if (cb.edges.size() + 1 != cb.size()) {
    report.pass = false;
    ++report.failures;
    report.detail = "ball has " + std::to_string(cb.edges.size()) + " edges for " +
                    std::to_string(cb.size()) + " nodes";
  }
  {
    std::vector<char> reached(cb.size(), 0);
    std::vector<int> queue{0};
    reached[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (int u : cb.adjacency[queue[h]])
        if (!reached[u]) {
          reached[u] = 1;
          queue.push_back(u);
        }
    if (queue.size() != cb.size()) {
      report.pass = false;
      ++report.failures;
      report.detail = "ball is disconnected";
    }
  }
  if (cover.base().is_regular()) {
    const int d = cover.base().degree_bound();
    for (int i : cb.interior())
      if (cb.degree(i) != d) {
        ++report.failures;
        if (report.pass) {
          report.pass = false;
          report.counterexample = {cb.vertices[i]};
          report.detail = "interior node of degree " + std::to_string(cb.degree(i));
        }
      }
  }
  return report;
}

VerificationReport verify_projection_surjective(const CoverModel& cover, int radius) {
  VerificationReport report;
  report.property = "projection_surjective";
  report.radius = radius;
  report.method = "base ball vs projected cover ball";
  const Ball cb = ball(cover, radius);
  const Ball bb = ball_around(cover.base(), cover.base_vertex(), radius);
  std::unordered_set<VertexRef> image;
  for (const auto& v : cb.vertices) image.insert(project(v));
  for (const auto& u : bb.vertices) {
    ++report.checked;
    if (image.contains(u)) continue;
    ++report.failures;
    if (report.pass) {
      report.pass = false;
      report.counterexample = {u};
      report.detail = "base vertex not covered";
    }
  }
  return report;
}

}  // namespace perclab
