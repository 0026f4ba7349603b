#include "perclab/saw.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "perclab/ball.hpp"
#include "perclab/errors.hpp"

namespace perclab {

namespace {

struct Walker {
  const std::vector<std::vector<int>>& adj;
  int n_max;
  std::uint64_t budget;
  std::atomic<std::uint64_t>& visits;
  std::vector<std::uint64_t> counts;
  std::vector<char> on_path;
  std::uint64_t local = 0;
  bool exhausted = false;

  Walker(const std::vector<std::vector<int>>& a, int n, std::uint64_t b,
         std::atomic<std::uint64_t>& v)
      : adj(a), n_max(n), budget(b), visits(v), counts(n + 1, 0), on_path(a.size(), 0) {}

  // Flush local visit counts into the shared counter every so often.
  bool charge() {
    if (++local < 4096) return true;
    const std::uint64_t total = visits.fetch_add(local) + local;
    local = 0;
    if (total > budget) exhausted = true;
    return !exhausted;
  }

  void walk(int v, int depth) {
    ++counts[depth];
    if (depth == n_max || exhausted || !charge()) return;
    on_path[v] = 1;
    for (int u : adj[v])
      if (!on_path[u]) walk(u, depth + 1);
    on_path[v] = 0;
  }

  void finish() {
    const std::uint64_t total = visits.fetch_add(local) + local;
    local = 0;
    if (total > budget) exhausted = true;
  }
};

// Returns false if the budget ran out; counts are then incomplete.
bool enumerate(const Ball& b, int n_max, std::uint64_t budget, int workers,
               std::vector<std::uint64_t>& counts, std::uint64_t& visits_out) {
  counts.assign(n_max + 1, 0);
  counts[0] = 1;
  std::atomic<std::uint64_t> visits{0};
  const auto& first = b.adjacency[0];
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(first.size())));
  std::vector<Walker> walkers;
  for (int i = 0; i < w; ++i) walkers.emplace_back(b.adjacency, n_max, budget, visits);
  auto job = [&](int i) {
    Walker& wk = walkers[i];
    wk.on_path[0] = 1;
    for (std::size_t k = i; k < first.size(); k += w) wk.walk(first[k], 1);
    wk.finish();
  };
  if (n_max >= 1) {
    if (w == 1) {
      job(0);
    } else {
      std::vector<std::jthread> pool;
      for (int i = 0; i < w; ++i) pool.emplace_back(job, i);
    }
  }
  bool ok = true;
  for (const auto& wk : walkers) {
    ok = ok && !wk.exhausted;
    for (int k = 1; k <= n_max; ++k) counts[k] += wk.counts[k];
  }
  visits_out = visits.load();
  return ok;
}

}  // namespace

SawTable count_saws(const GraphModel& graph, const VertexRef& origin, int n_max,
                    std::uint64_t budget, int workers) {
  if (n_max < 1) throw InvalidParameter("count_saws requires n_max >= 1");
  SawTable t;
  t.graph_name = graph.name();
  t.origin = origin;
  // A walk of length n never leaves the ball of radius n.
  const Ball b = ball_around(graph, origin, n_max);
  if (enumerate(b, n_max, budget, workers, t.counts, t.node_visits)) return t;

  int completed = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t visits = 0;
  for (int n = 1; n < n_max; ++n) {
    if (!enumerate(b, n, budget, workers, counts, visits)) break;
    completed = n;
  }
  throw BudgetExceeded("self-avoiding walk enumeration exceeded " + std::to_string(budget) +
                           " node visits; largest complete length " + std::to_string(completed),
                       completed);
}

SawTable count_saws(const GraphModel& graph, int n_max, std::uint64_t budget, int workers) {
  return count_saws(graph, graph.root(), n_max, budget, workers);
}

std::vector<SawTable> count_saws_per_orbit(const GraphModel& graph, int n_max,
                                           std::uint64_t budget, int workers) {
  const SymmetryDecl sym = graph.symmetry();
  std::vector<VertexRef> origins = sym.orbit_reps;
  if (origins.empty()) origins.push_back(graph.root());
  std::vector<SawTable> out;
  for (const auto& o : origins) out.push_back(count_saws(graph, o, n_max, budget, workers));
  return out;
}

MuEstimate mu_estimates(const SawTable& table, bool transitive) {
  if (table.n_max() < 1) throw InvalidParameter("mu_estimates needs a non-empty table");
  MuEstimate m;
  m.rigorous = transitive;
  double best = INFINITY;
  for (int n = 1; n <= table.n_max(); ++n) {
    const double v = std::pow(static_cast<double>(table.counts[n]), 1.0 / n);
    m.per_n.push_back(v);
    if (v < best) {
      best = v;
      m.best_n = n;
    }
    m.pc_lower_running.push_back(best > 0.0 ? std::min(1.0, 1.0 / best) : 1.0);
  }
  m.upper_bound = best;
  m.pc_lower = m.pc_lower_running.back();
  return m;
}

std::vector<FirstMomentPoint> first_moment_curve(const SawTable& table,
                                                 const std::vector<double>& p_grid) {
  std::vector<FirstMomentPoint> out;
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("first_moment_curve: p outside [0, 1]");
    for (int n = 1; n <= table.n_max(); ++n)
      out.push_back({p, n, static_cast<double>(table.counts[n]) * std::pow(p, n)});
  }
  return out;
}

}  // namespace perclab
