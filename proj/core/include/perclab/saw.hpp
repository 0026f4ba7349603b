#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perclab/graph.hpp"

namespace perclab {

inline constexpr std::uint64_t kDefaultSawBudget = 1'000'000'000;

// Exact self-avoiding walk counts from `origin`. counts[k] = c_k, the number of
// directed k-step walks visiting no vertex twice; counts[0] = 1.
struct SawTable {
  std::string graph_name;
  VertexRef origin;
  std::vector<std::uint64_t> counts;
  std::uint64_t node_visits = 0;

  int n_max() const { return static_cast<int>(counts.size()) - 1; }
};

// Depth-first enumeration on the materialized ball of radius n_max, split over
// first steps across `workers` threads. If the visit budget runs out, a second
// pass deepens one length at a time and the BudgetExceeded error reports the
// largest length completed within the budget.
SawTable count_saws(const GraphModel& graph, const VertexRef& origin, int n_max,
                    std::uint64_t budget = kDefaultSawBudget, int workers = 1);
SawTable count_saws(const GraphModel& graph, int n_max,
                    std::uint64_t budget = kDefaultSawBudget, int workers = 1);

// One table per declared orbit representative.
std::vector<SawTable> count_saws_per_orbit(const GraphModel& graph, int n_max,
                                           std::uint64_t budget = kDefaultSawBudget,
                                           int workers = 1);

struct MuEstimate {
  std::vector<double> per_n;  // per_n[k - 1] = c_k^(1/k)
  // min over k of c_k^(1/k). On a transitive graph c_{m+n} <= c_m c_n, so this
  // bounds mu from above and its reciprocal bounds p_c from below.
  double upper_bound = 0.0;
  int best_n = 0;
  double pc_lower = 0.0;
  bool rigorous = false;
  std::vector<double> pc_lower_running;  // 1 / min_{j <= k} c_j^(1/j)
};

MuEstimate mu_estimates(const SawTable& table, bool transitive);

struct FirstMomentPoint {
  double p = 0.0;
  int n = 0;
  double bound = 0.0;  // c_n p^n >= P_p(o <-> sphere of radius n)
};

std::vector<FirstMomentPoint> first_moment_curve(const SawTable& table,
                                                 const std::vector<double>& p_grid);

}  // namespace perclab
