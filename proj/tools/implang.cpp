// Command-line driver: generate, run, suite, rescore, analyze, report.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>

#include "implang/core/errors.hpp"
#include "implang/core/files.hpp"
#include "implang/harness/config.hpp"
#include "implang/harness/generate.hpp"
#include "implang/harness/orchestrate.hpp"
#include "implang/harness/report.hpp"
#include "implang/harness/suite.hpp"

namespace {

using namespace implang;
using namespace implang::harness;

enum Exit { kOk = 0, kUsage = 1, kRunFailures = 2, kConfig = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string experiment;
  std::vector<std::string> conditions;
  std::optional<std::string> learner;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<int> parallel;
  bool debug_wire = false;
  int run_index = 1;
};

void add_common(CLI::App* cmd, Flags& f, bool needs_experiment = true) {
  auto* e = cmd->add_option("--experiment,-e", f.experiment, "morphology, morphosyntax, syntax or all");
  if (needs_experiment) e->required();
  cmd->add_option("--condition,-c", f.conditions, "condition label(s), e.g. 5R4E high-S1 grammarA")
      ->delimiter(',');
  cmd->add_option("--learner,-l", f.learner, "baseline:<name>, chat:<model> or scripted[:<file>]");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--runs", f.runs, "runs per condition (overrides the default schedule)");
  cmd->add_option("--config", f.config, "INI config file");
  cmd->add_option("--out,-o", f.out, "output directory");
  cmd->add_option("--parallel,-j", f.parallel, "concurrent runs");
  cmd->add_flag("--debug-wire", f.debug_wire, "log request/response bodies to stderr");
}

SuiteSettings settings_from(const Flags& f) {
  SuiteSettings s = f.config ? load_settings(*f.config) : default_settings();
  if (f.learner) apply_learner_spec(s.learner, *f.learner);
  if (f.seed) s.seed = *f.seed;
  if (f.runs) {
    if (*f.runs < 1) throw UsageError("--runs must be >= 1");
    s.runs_per_cell = f.runs;
  }
  if (f.out) s.out_dir = *f.out;
  if (f.parallel) {
    if (*f.parallel < 1) throw UsageError("--parallel must be >= 1");
    s.parallel = *f.parallel;
  }
  s.debug_wire = s.debug_wire || f.debug_wire;
  s.learner.validate();
  return s;
}

std::vector<Experiment> experiments_from(const std::string& name) {
  if (name == "all") return {Experiment::morphology, Experiment::morphosyntax, Experiment::syntax};
  try {
    return {parse_experiment(name)};
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown experiment: " + name);
  }
}

std::vector<RunConfig> planned(Experiment e, const SuiteSettings& s, const std::vector<std::string>& conds) {
  try {
    return schedule(e, s, conds);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
}

RunContext context_for(const SuiteSettings& s) {
  RunContext ctx;
  ctx.limiter = std::make_shared<learners::RequestLimiter>(s.learner.max_in_flight);
  if (s.debug_wire) ctx.wire_log = &std::cerr;
  return ctx;
}

void print_manifest(const RunManifest& m, bool skipped) {
  std::cout << fmt::format("{:<28} {}{}{}\n", m.run_id, to_string(m.status), skipped ? " (cached)" : "",
                           m.failure_reason.empty() ? "" : ": " + m.failure_reason);
}

int cmd_generate(const Flags& f) {
  const auto s = settings_from(f);
  for (auto e : experiments_from(f.experiment))
    for (const auto& rc : planned(e, s, f.conditions))
      for (const auto& p : write_stimuli(rc)) std::cout << p.generic_string() << "\n";
  return kOk;
}

int cmd_run(const Flags& f) {
  const auto s = settings_from(f);
  const auto exps = experiments_from(f.experiment);
  if (exps.size() != 1) throw UsageError("run takes a single experiment");
  if (f.conditions.size() != 1) throw UsageError("run needs exactly one --condition");
  SuiteSettings one = s;
  one.runs_per_cell = std::max(f.run_index, s.runs_per_cell.value_or(default_runs(exps[0])));
  const auto plan = planned(exps[0], one, f.conditions);
  if (f.run_index < 1 || f.run_index > static_cast<int>(plan.size())) throw UsageError("--run-index out of range");
  const auto m = orchestrate_run(plan[static_cast<std::size_t>(f.run_index - 1)], context_for(s));
  print_manifest(m, false);
  return m.status == RunStatus::completed ? kOk : kRunFailures;
}

int cmd_suite(const Flags& f, int tolerance_flag) {
  auto s = settings_from(f);
  if (tolerance_flag >= 0) s.failure_tolerance = tolerance_flag;
  const auto ctx = context_for(s);
  int failures = 0;
  for (auto e : experiments_from(f.experiment)) {
    const auto plan = planned(e, s, f.conditions);
    const auto result = run_suite(plan, s.parallel, ctx, print_manifest);
    failures += result.failed;
    std::cout << fmt::format("{}: {} completed ({} cached), {} failed\n", to_string(e), result.completed,
                             result.skipped, result.failed);
    const auto agg = load_aggregates(e, s.out_dir);
    if (!agg.runs.empty()) {
      emit_report(agg, s.out_dir / std::string(to_string(e)));
      std::cout << (s.out_dir / std::string(to_string(e)) / "report.md").generic_string() << "\n";
    }
  }
  return failures > s.failure_tolerance ? kRunFailures : kOk;
}

int cmd_rescore(const Flags& f) {
  const auto s = settings_from(f);
  int problems = 0;
  for (auto e : experiments_from(f.experiment.empty() ? "all" : f.experiment)) {
    const auto root = s.out_dir / std::string(to_string(e)) / "runs";
    if (!std::filesystem::exists(root)) continue;
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root))
      if (std::filesystem::exists(entry.path() / kManifestFile)) dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
      const auto m = read_manifest(d);
      if (m.status != RunStatus::completed) continue;
      if (!f.conditions.empty() &&
          std::find(f.conditions.begin(), f.conditions.end(), m.condition) == f.conditions.end())
        continue;
      try {
        const int mismatches = rescore_run(config_from_manifest(m, s));
        std::cout << fmt::format("{:<28} rescored{}\n", m.run_id,
                                 mismatches ? fmt::format(" ({} prompts differ from the recording)", mismatches) : "");
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& ex) {
        ++problems;
        std::cout << fmt::format("{:<28} failed: {}\n", m.run_id, ex.what());
      }
    }
  }
  return problems ? kRunFailures : kOk;
}

int cmd_analyze(const Flags& f) {
  const auto s = settings_from(f);
  for (auto e : experiments_from(f.experiment)) {
    const auto agg = load_aggregates(e, s.out_dir);
    if (agg.runs.empty()) {
      std::cerr << "no completed " << to_string(e) << " runs under " << s.out_dir.generic_string() << "\n";
      return kRunFailures;
    }
    const auto an = analyze(agg);
    const auto csv = stats_csv(e, an);
    atomic_write(s.out_dir / std::string(to_string(e)) / "stats.csv", csv);
    std::cout << csv;
  }
  return kOk;
}

int cmd_report(const Flags& f) {
  const auto s = settings_from(f);
  for (auto e : experiments_from(f.experiment)) {
    const auto agg = load_aggregates(e, s.out_dir);
    if (agg.runs.empty()) {
      std::cerr << "no completed " << to_string(e) << " runs under " << s.out_dir.generic_string() << "\n";
      return kRunFailures;
    }
    emit_report(agg, s.out_dir / std::string(to_string(e)));
    std::cout << (s.out_dir / std::string(to_string(e)) / "report.md").generic_string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Artificial language learning harness"};
  app.require_subcommand(1);
  Flags f;
  int tolerance = -1;

  auto* gen = app.add_subcommand("generate", "write stimuli without running a learner");
  add_common(gen, f);
  auto* run = app.add_subcommand("run", "a single run");
  add_common(run, f);
  run->add_option("--run-index", f.run_index, "position in the condition's schedule (1-based)");
  auto* suite = app.add_subcommand("suite", "the full repetition schedule, then the report");
  add_common(suite, f);
  suite->add_option("--failure-tolerance", tolerance, "failed runs allowed before exiting nonzero");
  auto* rescore = app.add_subcommand("rescore", "re-parse stored transcripts without a learner");
  add_common(rescore, f, false);
  auto* an = app.add_subcommand("analyze", "statistics over completed runs");
  add_common(an, f);
  auto* rep = app.add_subcommand("report", "markdown, CSV and SVG report");
  add_common(rep, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(f);
    if (run->parsed()) return cmd_run(f);
    if (suite->parsed()) return cmd_suite(f, tolerance);
    if (rescore->parsed()) return cmd_rescore(f);
    if (an->parsed()) return cmd_analyze(f);
    if (rep->parsed()) return cmd_report(f);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "configuration: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRunFailures;
  }
  return kUsage;
}
