#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "perclab/errors.hpp"
#include "perclab/percolation.hpp"

namespace perclab {

namespace {

struct Retention {
  double point = 0.0;
  Interval ci{0.0, 1.0};
};

// Per-doubling retention between two nested crossing counts.
Retention retention_between(const PercEstimate& inner, const PercEstimate& outer) {
  Retention r;
  if (inner.successes == 0) return r;
  const double doublings = std::log2(static_cast<double>(outer.radius) / inner.radius);
  const double exponent = 1.0 / doublings;
  const double ratio = static_cast<double>(outer.successes) / inner.successes;
  const Interval ci = wilson_interval(outer.successes, inner.successes);
  r.point = std::pow(ratio, exponent);
  r.ci = {std::pow(ci.lo, exponent), std::pow(ci.hi, exponent)};
  return r;
}

double neg_log(double x) { return x > 0.0 ? -std::log(x) : INFINITY; }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

}  // namespace

Classification classify(const GraphModel& graph, double p, const std::vector<int>& radii,
                        std::int64_t trials, std::uint64_t seed,
                        const ClassifyThresholds& thresholds,
                        const ExplorationOptions& options) {
  if (radii.size() < 2) throw InvalidParameter("classify needs at least two radii");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (radii[i] >= radii[i + 1]) throw InvalidParameter("classify radii must be strictly increasing");
  if (radii.front() < 1) throw InvalidParameter("classify radii must be >= 1");

  Classification c;
  c.p = p;
  c.estimates = crossing_profile(graph, radii, p, trials, seed, options);
  const auto& first = c.estimates.front();
  const auto& last = c.estimates.back();

  for (std::size_t i = 0; i + 1 < c.estimates.size(); ++i) {
    const Retention r = retention_between(c.estimates[i], c.estimates[i + 1]);
    c.pair_retention.push_back(r.point);
    c.pair_retention_ci.push_back(r.ci);
  }
  const Retention span = retention_between(first, last);
  c.retention = span.point;
  c.retention_ci = span.ci;

  if (first.successes == 0) {
    c.phase = Phase::subcritical;
    c.notes = "no trial reached the innermost radius";
    return c;
  }

  const Interval inner = c.pair_retention_ci.front();
  const Interval outer = c.pair_retention_ci.back();
  const bool halving = span.ci.hi <= thresholds.halving;
  const bool accelerating_strongly =
      c.pair_retention.size() >= 2 &&
      neg_log(outer.hi) >= thresholds.acceleration * neg_log(inner.lo);
  const bool accelerating = c.pair_retention.size() >= 2 && outer.hi < inner.lo;
  const bool plateau = span.ci.lo >= thresholds.plateau;
  const bool above_floor = last.ci_low >= thresholds.floor;

  c.notes = fmt("rho=%.4f [%.4f, %.4f]", span.point, span.ci.lo, span.ci.hi);
  if (c.pair_retention.size() >= 2)
    c.notes += fmt("; inner rho=%.4f, outer rho=%.4f", c.pair_retention.front(),
                   c.pair_retention.back());

  if (halving || accelerating_strongly) {
    c.phase = Phase::subcritical;
    c.notes += halving ? "; halving per doubling" : "; decay accelerating";
  } else if (plateau && !accelerating && above_floor) {
    c.phase = Phase::supercritical;
    c.notes += "; plateau";
  } else {
    c.phase = Phase::undecided;
    if (plateau && accelerating) c.notes += "; plateau level but decay accelerating";
    if (plateau && !above_floor) c.notes += "; crossing probability below floor";
  }
  return c;
}

PcBracket estimate_pc(const GraphModel& graph, const std::vector<int>& radii,
                      std::int64_t trials, double tol, std::uint64_t seed,
                      const ClassifyThresholds& thresholds, const ExplorationOptions& options) {
  if (tol < 0.005) throw InvalidParameter("estimate_pc tolerance must be >= 0.005");
  PcBracket b;
  b.radii_used = radii;
  b.trials = trials;
  std::set<double> undecided;
  constexpr int kMaxProbes = 40;

  for (int probe = 0; probe < kMaxProbes; ++probe) {
    if (b.hi - b.lo <= tol) {
      b.converged = true;
      break;
    }
    // Undecided points outside (lo, hi) no longer matter.
    for (auto it = undecided.begin(); it != undecided.end();)
      it = (*it <= b.lo || *it >= b.hi) ? undecided.erase(it) : std::next(it);

    double p;
    if (undecided.empty()) {
      p = 0.5 * (b.lo + b.hi);
    } else {
      const double band_lo = *undecided.begin(), band_hi = *undecided.rbegin();
      const double gap_lo = band_lo - b.lo, gap_hi = b.hi - band_hi;
      if (std::max(gap_lo, gap_hi) < tol / 4) break;
      p = gap_lo >= gap_hi ? 0.5 * (b.lo + band_lo) : 0.5 * (band_hi + b.hi);
    }

    Classification c = classify(graph, p, radii, trials, seed, thresholds, options);
    if (c.phase == Phase::subcritical)
      b.lo = p;
    else if (c.phase == Phase::supercritical)
      b.hi = p;
    else
      undecided.insert(p);
    b.probes.push_back(std::move(c));
  }

  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu probes; ", b.probes.size());
  b.method_notes = buf;
  if (b.converged) {
    b.method_notes += "width reached tolerance";
  } else if (!undecided.empty()) {
    std::snprintf(buf, sizeof buf, "undecided band [%.6g, %.6g] blocks further narrowing",
                  *undecided.begin(), *undecided.rbegin());
    b.method_notes += buf;
  } else {
    b.method_notes += "probe limit reached";
  }
  if (b.lo <= 0.0) b.method_notes += "; no probe classified subcritical";
  if (b.hi >= 1.0) b.method_notes += "; no probe classified supercritical";
  return b;
}

}  // namespace perclab
