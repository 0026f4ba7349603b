#include "perclab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "perclab/ball.hpp"
#include "perclab/errors.hpp"

namespace perclab {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  // Rounding can nudge a bound past the point estimate at 0 or 1.
  out.lo = std::min(out.lo, phat);
  out.hi = std::max(out.hi, phat);
  return out;
}

namespace {

std::uint64_t payload_hash(std::uint64_t h, const VertexRef& v) {
  h = mix64(h ^ (0xa0761d6478bd642fULL + v.size()));
  for (std::int64_t x : v.payload()) h = mix64(h ^ static_cast<std::uint64_t>(x));
  return h;
}

}  // namespace

double edge_uniform(std::uint64_t seed, std::uint64_t trial, const VertexRef& a,
                    const VertexRef& b) {
  const bool ordered = a < b;
  const VertexRef& lo = ordered ? a : b;
  const VertexRef& hi = ordered ? b : a;
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ trial);
  h = payload_hash(h, lo);
  h = payload_hash(h, hi);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double edge_uniform(std::uint64_t seed, std::uint64_t trial, const EdgeKey& edge) {
  return edge_uniform(seed, trial, edge.lo, edge.hi);
}

bool edge_open(std::uint64_t seed, std::uint64_t trial, const EdgeKey& edge, double p) {
  return edge_uniform(seed, trial, edge) < p;
}

void PercConfig::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("p must lie in [0, 1]");
  if (trials < 1) throw InvalidParameter("trials must be >= 1");
  if (radius < 0) throw InvalidParameter("radius must be >= 0");
}

struct ClusterExplorer::State {
  const GraphModel& graph;
  int max_radius;
  std::size_t budget;
  // Distances for families without a closed form, from one materialized ball.
  std::unordered_map<VertexRef, int> fallback_dist;
  bool has_closed_form;
  std::unordered_set<VertexRef> visited;
  std::vector<std::pair<VertexRef, int>> stack;
  std::vector<VertexRef> nbrs;

  State(const GraphModel& g, int r, std::size_t b)
      : graph(g), max_radius(r), budget(b),
        has_closed_form(g.distance_from_root(g.root()).has_value()) {
    if (!has_closed_form) {
      Ball full = ball(g, r);
      for (std::size_t i = 0; i < full.size(); ++i) fallback_dist.emplace(full.vertices[i], full.dist[i]);
    }
  }

  int dist(const VertexRef& v) const {
    if (has_closed_form) return *graph.distance_from_root(v);
    return fallback_dist.at(v);
  }
};

ClusterExplorer::ClusterExplorer(const GraphModel& graph, int max_radius, std::size_t budget)
    : state_(std::make_unique<State>(graph, max_radius, budget)) {}
ClusterExplorer::~ClusterExplorer() = default;
ClusterExplorer::ClusterExplorer(ClusterExplorer&&) noexcept = default;
ClusterExplorer& ClusterExplorer::operator=(ClusterExplorer&&) noexcept = default;

TrialOutcome ClusterExplorer::run(double p, std::uint64_t seed, std::uint64_t trial) {
  State& s = *state_;
  TrialOutcome out;
  if (s.max_radius == 0) return out;
  s.visited.clear();
  s.stack.clear();
  const VertexRef root = s.graph.root();
  s.visited.insert(root);
  s.stack.emplace_back(root, 0);
  // Depth-first: supercritical clusters hit the sphere quickly. The reached
  // radius does not depend on the exploration order.
  while (!s.stack.empty()) {
    auto [v, dv] = std::move(s.stack.back());
    s.stack.pop_back();
    s.nbrs.clear();
    s.graph.neighbors(v, s.nbrs);
    for (auto& u : s.nbrs) {
      if (s.visited.contains(u)) continue;
      if (!(edge_uniform(seed, trial, v, u) < p)) continue;
      const int du = s.dist(u);
      if (du > s.max_radius) continue;
      out.reached = std::max(out.reached, du);
      if (out.reached >= s.max_radius) return out;
      if (s.visited.size() >= s.budget) {
        out.reached = s.max_radius;
        out.budget_hit = true;
        return out;
      }
      s.visited.insert(u);
      s.stack.emplace_back(std::move(u), du);
    }
  }
  return out;
}

namespace {

struct Tally {
  std::vector<std::int64_t> reached_at_least;  // indexed by radius
  std::int64_t budget_flagged = 0;
};

Tally run_trials(const GraphModel& graph, int max_radius, double p, std::int64_t trials,
                 std::uint64_t seed, const ExplorationOptions& options) {
  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(trials)));
  std::vector<Tally> partial(workers);
  auto work = [&](int w) {
    Tally& t = partial[w];
    t.reached_at_least.assign(max_radius + 1, 0);
    ClusterExplorer explorer(graph, max_radius, options.vertex_budget);
    const std::int64_t begin = trials * w / workers, end = trials * (w + 1) / workers;
    for (std::int64_t i = begin; i < end; ++i) {
      const TrialOutcome o = explorer.run(p, seed, static_cast<std::uint64_t>(i));
      ++t.reached_at_least[o.reached];
      if (o.budget_hit) ++t.budget_flagged;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  Tally total;
  total.reached_at_least.assign(max_radius + 1, 0);
  for (const auto& t : partial) {
    for (int r = 0; r <= max_radius; ++r) total.reached_at_least[r] += t.reached_at_least[r];
    total.budget_flagged += t.budget_flagged;
  }
  // Convert "reached exactly r" counts into "reached at least r".
  for (int r = max_radius - 1; r >= 0; --r)
    total.reached_at_least[r] += total.reached_at_least[r + 1];
  return total;
}

PercEstimate make_estimate(double p, int radius, std::int64_t successes, std::int64_t trials,
                           std::int64_t flagged) {
  PercEstimate e;
  e.p = p;
  e.radius = radius;
  e.successes = successes;
  e.trials = trials;
  e.point = static_cast<double>(successes) / static_cast<double>(trials);
  const Interval ci = wilson_interval(successes, trials);
  e.ci_low = ci.lo;
  e.ci_high = ci.hi;
  e.budget_flagged = flagged;
  return e;
}

}  // namespace

std::vector<PercEstimate> crossing_profile(const GraphModel& graph, const std::vector<int>& radii,
                                           double p, std::int64_t trials, std::uint64_t seed,
                                           const ExplorationOptions& options) {
  if (radii.empty()) throw InvalidParameter("crossing_profile needs at least one radius");
  for (int r : radii)
    PercConfig{p, r, trials, seed}.validate();
  const int max_radius = *std::max_element(radii.begin(), radii.end());
  const Tally tally = run_trials(graph, max_radius, p, trials, seed, options);
  std::vector<PercEstimate> out;
  for (int r : radii)
    out.push_back(make_estimate(p, r, tally.reached_at_least[r], trials, tally.budget_flagged));
  return out;
}

PercEstimate crossing_probability(const GraphModel& graph, int radius, double p,
                                  std::int64_t trials, std::uint64_t seed,
                                  const ExplorationOptions& options) {
  if (radius < 1) throw InvalidParameter("crossing_probability requires radius >= 1");
  return crossing_profile(graph, {radius}, p, trials, seed, options).front();
}

std::vector<PercEstimate> theta_curve(const GraphModel& graph, int radius,
                                      const std::vector<double>& p_grid, std::int64_t trials,
                                      std::uint64_t seed, const ExplorationOptions& options) {
  if (!std::is_sorted(p_grid.begin(), p_grid.end()))
    throw InvalidParameter("theta_curve p_grid must be sorted ascending");
  std::vector<PercEstimate> out;
  for (double p : p_grid) out.push_back(crossing_probability(graph, radius, p, trials, seed, options));
  return out;
}

double tree_crossing_exact(int d, double p, int radius) {
  if (d < 2) throw InvalidParameter("tree_crossing_exact requires d >= 2");
  if (radius <= 0) return 1.0;
  double q = 1.0;  // a non-root vertex's subtree reaches k further levels
  for (int k = 0; k < radius - 1; ++k) q = 1.0 - std::pow(1.0 - p * q, d - 1);
  return 1.0 - std::pow(1.0 - p * q, d);
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::subcritical:
      return "subcritical";
    case Phase::supercritical:
      return "supercritical";
    case Phase::undecided:
      return "undecided";
  }
  return "unknown";
}

}  // namespace perclab
