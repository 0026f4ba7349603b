#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perclab/graph.hpp"
#include "perclab/percolation.hpp"

namespace perclab {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int claim_fail = 1;
inline constexpr int usage = 2;
inline constexpr int budget = 3;
}  // namespace exit_code

enum class OutputFormat { csv, json };
std::string to_string(OutputFormat format);
OutputFormat parse_format(std::string_view text);

// Everything needed to reproduce one run. Fields that do not apply to the
// command are ignored; `to_json` records the resolved values, defaults included.
struct ExperimentSpec {
  std::string command;  // perc | saw | tree | cover | report
  GraphSpec graph{"regular_tree", {{"d", "3"}}};

  // perc
  std::vector<double> p_grid;
  std::vector<int> radii;  // empty: default_radii(graph)
  std::int64_t trials = 20000;
  double tol = 0.01;
  bool estimate_pc = false;
  ClassifyThresholds thresholds;

  // saw (p_grid, when given, adds the first-moment curve)
  int n_max = 12;

  // tree
  int depth = 16;
  double lambda_tol = 0.1;
  std::optional<int> subperiodic_n;

  // cover
  int radius = 10;
  std::optional<int> r_cap;         // default: declared K + 1, else 8
  std::vector<std::string> checks;  // empty: all of cover_check_names()
  bool expect_fail = false;

  // report
  std::string suite;

  std::uint64_t seed = kDefaultSeed;
  int workers = 1;
  std::optional<std::uint64_t> budget;
  OutputFormat format = OutputFormat::json;
  std::string out;

  std::string to_json() const;
  static ExperimentSpec from_json(std::string_view text);
};

// Radii used when a perc run does not give any: long enough to separate the
// phases on each family at desk-scale cost.
std::vector<int> default_radii(const GraphSpec& graph);

std::vector<std::string> cover_check_names();
std::vector<std::string> suite_names();

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict verdict);

struct Claim {
  std::string id;
  int criterion = 0;
  std::string statement;
  Verdict verdict = Verdict::inconclusive;
  std::string summary;        // one line of computed evidence
  std::string evidence_file;  // relative path of the module output backing it
  std::string evidence;       // canonical JSON written to evidence_file
};

struct ClaimReport {
  std::string suite;
  std::vector<Claim> claims;
  bool any_fail() const;
};

struct ReportOptions {
  std::uint64_t seed = kDefaultSeed;
  std::int64_t trials = 20000;
  int workers = 1;
};

ClaimReport run_suite(std::string_view suite, const ReportOptions& options = {});

struct RunOutput {
  int exit_code = exit_code::ok;
  std::string body;           // canonical CSV or JSON
  std::string resolved_spec;  // JSON
  // Extra files keyed by path relative to the output location.
  std::map<std::string, std::string> files;
  std::string diagnostics;    // human-readable, not part of the canonical output
};

// Dispatches on spec.command. Usage and budget errors become exit codes 2 and
// 3 with the message in `diagnostics`.
RunOutput run(const ExperimentSpec& spec);

// Fixed six-significant-digit rendering used by every canonical output.
std::string format_number(double x);

}  // namespace perclab
