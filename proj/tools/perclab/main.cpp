#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "perclab/errors.hpp"
#include "perclab/experiment.hpp"

namespace fs = std::filesystem;
using namespace perclab;

namespace {

struct GraphFlags {
  std::string family;
  std::string graph;
  std::optional<int> d;
  std::string base;

  void attach(CLI::App* cmd, bool cover_base) {
    cmd->add_option("--family", family, "graph family")->check(CLI::IsMember(family_names()));
    cmd->add_option("--d", d, "degree parameter for tree families");
    cmd->add_option("--graph", graph, "full graph spec, e.g. \"family=fig1_graph, d=3\"");
    if (!cover_base) cmd->add_option("--base", base, "base family when --family cover");
  }

  GraphSpec resolve(const GraphSpec& fallback) const {
    if (!graph.empty()) return GraphSpec::parse(graph);
    if (family.empty()) {
      if (d) throw InvalidParameter("--d given without --family");
      return fallback;
    }
    GraphSpec g{family, {}};
    if (family == "cover") {
      if (base.empty()) throw InvalidParameter("--family cover needs --base");
      g.params["base"] = base;
      if (d) g.params["base_d"] = std::to_string(*d);
    } else if (d) {
      g.params["d"] = std::to_string(*d);
    }
    return g;
  }
};

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

int emit(const RunOutput& out, const std::string& out_path) {
  if (!out.diagnostics.empty()) std::cerr << out.diagnostics << (out.diagnostics.back() == '\n' ? "" : "\n");
  if (out.body.empty()) return out.exit_code;
  if (out_path.empty() || out_path == "-") {
    std::cout << out.body;
    std::cerr << "# resolved spec\n" << out.resolved_spec;
    for (const auto& [name, _] : out.files)
      std::cerr << "# evidence " << name << " not written (no --out)\n";
    return out.exit_code;
  }
  const fs::path target(out_path);
  write_file(target, out.body);
  write_file(fs::path(out_path + ".spec.json"), out.resolved_spec);
  for (const auto& [name, content] : out.files) write_file(target.parent_path() / name, content);
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perclab: percolation thresholds, self-avoiding walks, branching numbers and universal covers"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  ExperimentSpec spec;
  std::string format = "json";
  std::string replay;
  app.add_option("--seed", spec.seed, "base seed for every random stream")->capture_default_str();
  app.add_option("--workers", spec.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--budget", spec.budget, "vertex / node-visit budget override");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", spec.out, "output file (default: stdout)");
  app.add_option("--spec", replay, "replay a resolved spec file written by an earlier run")
      ->check(CLI::ExistingFile);

  GraphFlags perc_g, saw_g, tree_g, cover_g;

  auto* perc = app.add_subcommand("perc", "crossing probabilities and p_c brackets");
  perc_g.attach(perc, false);
  perc->add_option("--p,--p-grid", spec.p_grid, "p values, ascending")->delimiter(',');
  perc->add_option("--radii", spec.radii, "radii (default depends on the family)")->delimiter(',');
  perc->add_option("--trials", spec.trials, "trials per p")->capture_default_str();
  perc->add_option("--tol", spec.tol, "bracket width target for --estimate-pc")->capture_default_str();
  perc->add_flag("--estimate-pc", spec.estimate_pc, "bisect for a p_c bracket");
  perc->add_option("--halving", spec.thresholds.halving)->capture_default_str();
  perc->add_option("--acceleration", spec.thresholds.acceleration)->capture_default_str();
  perc->add_option("--plateau", spec.thresholds.plateau)->capture_default_str();
  perc->add_option("--floor", spec.thresholds.floor)->capture_default_str();

  auto* saw = app.add_subcommand("saw", "exact self-avoiding walk counts");
  saw_g.attach(saw, false);
  saw->add_option("--n-max", spec.n_max, "longest walk length")->capture_default_str();
  saw->add_option("--p-grid", spec.p_grid, "p values for the first-moment bound c_n p^n")->delimiter(',');

  auto* tree = app.add_subcommand("tree", "level sizes and branching-number bracket");
  tree_g.attach(tree, false);
  tree->add_option("--depth", spec.depth)->capture_default_str();
  tree->add_option("--lambda-tol", spec.lambda_tol)->capture_default_str();
  tree->add_option("--subperiodic", spec.subperiodic_n, "also search an N-subperiodicity witness");

  auto* cover = app.add_subcommand("cover", "universal cover checks over a base graph");
  cover_g.attach(cover, true);
  cover->add_option("--radius", spec.radius)->capture_default_str();
  cover->add_option("--r-cap", spec.r_cap, "fibre search radius (default K + 1, else 8)");
  cover->add_option("--check", spec.checks, "checks to run (default all)")
      ->check(CLI::IsMember(cover_check_names()));
  cover->add_flag("--expect-fail", spec.expect_fail, "exit 0 only if every selected check fails");

  auto* report = app.add_subcommand("report", "claim report for one suite");
  report->add_option("--suite", spec.suite)->required()->check(CLI::IsMember(suite_names()));
  report->add_option("--trials", spec.trials, "trials per classify call")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    spec.format = parse_format(format);
    if (!replay.empty()) {
      std::ifstream f(replay);
      std::stringstream buf;
      buf << f.rdbuf();
      ExperimentSpec replayed = ExperimentSpec::from_json(buf.str());
      if (!spec.out.empty()) replayed.out = spec.out;
      return emit(run(replayed), replayed.out);
    }
    if (perc->parsed()) {
      spec.command = "perc";
      spec.graph = perc_g.resolve(spec.graph);
    } else if (saw->parsed()) {
      spec.command = "saw";
      spec.graph = saw_g.resolve(spec.graph);
    } else if (tree->parsed()) {
      spec.command = "tree";
      spec.graph = tree_g.resolve(spec.graph);
    } else if (cover->parsed()) {
      spec.command = "cover";
      spec.graph = cover_g.resolve(spec.graph);
    } else if (report->parsed()) {
      spec.command = "report";
    } else {
      std::cerr << app.help();
      return exit_code::usage;
    }
    return emit(run(spec), spec.out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::usage;
  }
}
