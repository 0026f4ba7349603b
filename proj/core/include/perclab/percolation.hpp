#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr std::size_t kDefaultVertexBudget = 5'000'000;

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion (95% by default).
Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                         double z = 1.959963984540054);

// Uniform value in [0, 1) attached to an edge for one trial. A pure function
// of (seed, trial, unordered endpoint pair).
double edge_uniform(std::uint64_t seed, std::uint64_t trial, const VertexRef& a,
                    const VertexRef& b);
double edge_uniform(std::uint64_t seed, std::uint64_t trial, const EdgeKey& edge);

// Bond is open iff its uniform is below p, so open sets are nested in p.
bool edge_open(std::uint64_t seed, std::uint64_t trial, const EdgeKey& edge, double p);

struct ExplorationOptions {
  std::size_t vertex_budget = kDefaultVertexBudget;
  int workers = 1;
};

struct PercConfig {
  double p = 0.5;
  int radius = 1;
  std::int64_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
};

// Estimate of P_p(root <-> sphere of the given radius).
struct PercEstimate {
  double p = 0.0;
  int radius = 0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  // Trials whose cluster blew the vertex budget before reaching the sphere;
  // they are counted as successes.
  std::int64_t budget_flagged = 0;
};

// Outcome of one trial: the largest root distance reached by the open cluster
// explored inside the ball of radius `max_radius` (capped there).
struct TrialOutcome {
  int reached = 0;
  bool budget_hit = false;
};

// Explores the open cluster of the root lazily, edge states drawn on demand.
class ClusterExplorer {
 public:
  ClusterExplorer(const GraphModel& graph, int max_radius, std::size_t vertex_budget);
  ~ClusterExplorer();
  ClusterExplorer(ClusterExplorer&&) noexcept;
  ClusterExplorer& operator=(ClusterExplorer&&) noexcept;

  TrialOutcome run(double p, std::uint64_t seed, std::uint64_t trial);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// One set of trials shared by all radii: estimate k uses the trials whose
// cluster reached radii[k]. Radii need not be sorted.
std::vector<PercEstimate> crossing_profile(const GraphModel& graph, const std::vector<int>& radii,
                                           double p, std::int64_t trials, std::uint64_t seed,
                                           const ExplorationOptions& options = {});

PercEstimate crossing_probability(const GraphModel& graph, int radius, double p,
                                  std::int64_t trials, std::uint64_t seed,
                                  const ExplorationOptions& options = {});

// One estimate per p; shared (seed, trial) streams make the points exactly
// non-decreasing in p.
std::vector<PercEstimate> theta_curve(const GraphModel& graph, int radius,
                                      const std::vector<double>& p_grid, std::int64_t trials,
                                      std::uint64_t seed, const ExplorationOptions& options = {});

// Exact depth-r crossing probability on regular_tree(d) from the
// Galton-Watson recursion q_{k+1} = 1 - (1 - p q_k)^{d-1}.
double tree_crossing_exact(int d, double p, int radius);

enum class Phase { subcritical, supercritical, undecided };
std::string to_string(Phase phase);

// Thresholds of the decay classifier. Retention rho is the per-doubling
// conditional survival (theta(r') / theta(r))^(1 / log2(r' / r)): the fraction
// of crossing probability kept each time the radius doubles. Crossing events
// are nested, so theta(r') / theta(r) is a binomial proportion over the trials
// that reached r and gets a Wilson interval of its own.
struct ClassifyThresholds {
  // Subcritical: rho over the whole radius span is at most this (CI upper bound).
  double halving = 0.5;
  // Subcritical: -ln rho on the outermost pair is at least `acceleration`
  // times -ln rho on the innermost pair, comparing the conservative CI ends.
  // Exponential decay makes -ln rho grow linearly in r; power laws keep it flat.
  double acceleration = 1.5;
  // Supercritical needs all of: rho over the span at least `plateau` (CI lower
  // bound), no CI-separated drop of rho from the inner to the outer pair, and
  // theta(r_max) above `floor` (CI lower bound).
  double plateau = 0.75;
  double floor = 0.01;
};

struct Classification {
  Phase phase = Phase::undecided;
  double p = 0.0;
  std::vector<PercEstimate> estimates;
  // Per-doubling retention over the full radius span, with its CI.
  double retention = 0.0;
  Interval retention_ci;
  std::vector<double> pair_retention;
  std::vector<Interval> pair_retention_ci;
  std::string notes;
};

Classification classify(const GraphModel& graph, double p, const std::vector<int>& radii,
                        std::int64_t trials, std::uint64_t seed,
                        const ClassifyThresholds& thresholds = {},
                        const ExplorationOptions& options = {});

struct PcBracket {
  double lo = 0.0;  // largest p classified subcritical
  double hi = 1.0;  // smallest p classified supercritical
  std::vector<int> radii_used;
  std::int64_t trials = 0;
  std::vector<Classification> probes;  // in probe order
  bool converged = false;              // hi - lo <= tol reached
  std::string method_notes;
};

// Bisection on p using classify(). Undecided probes open an undecided band;
// subsequent probes bisect the gaps between the decided ends and that band
// until both gaps are below tol / 4, or the bracket width reaches tol.
PcBracket estimate_pc(const GraphModel& graph, const std::vector<int>& radii,
                      std::int64_t trials, double tol, std::uint64_t seed,
                      const ClassifyThresholds& thresholds = {},
                      const ExplorationOptions& options = {});

}  // namespace perclab
