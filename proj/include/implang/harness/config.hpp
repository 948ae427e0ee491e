#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "implang/core/condition.hpp"
#include "implang/fsg/generation.hpp"
#include "implang/learners/chat_client.hpp"

namespace implang::harness {

struct Seeds {
  std::uint64_t stimulus_seed = 0;
  std::uint64_t order_seed = 0;
  std::uint64_t learner_seed = 0;
};

/// Experiment knobs that are not per-run.
struct ExperimentOptions {
  // morphology
  std::optional<std::filesystem::path> annotation_overrides;
  // morphosyntax
  bool printed_type2 = false;
  bool reuse_training_items = false;
  std::optional<std::filesystem::path> probe_overrides;
  // syntax
  fsg::BlockPlan block_plan{};
  std::optional<std::filesystem::path> grammar_a_file;
  std::optional<std::filesystem::path> grammar_b_file;
  int questionnaire_corpus = 10'000;
};

struct RunConfig {
  ConditionId condition{Experiment::morphology, "5R4E"};
  learners::LearnerConfig learner;
  ExperimentOptions options;
  Seeds seeds;
  int run_index = 1;    // 1-based position in the condition's schedule
  int order_index = 0;  // which of the seeded orders / stimulus sets
  std::filesystem::path out_dir = "results";

  std::string run_id() const;
  std::filesystem::path run_dir() const;
  /// Everything that influences the run's outputs, one key=value per line.
  std::string canonical() const;
  std::string config_hash() const;
};

/// Suite-level settings, loaded from the flat INI config plus CLI flags.
struct SuiteSettings {
  std::uint64_t seed = 1;
  std::optional<int> runs_per_cell;  // overrides the default schedule
  int parallel = 1;
  int failure_tolerance = 0;
  std::filesystem::path out_dir = "results";
  bool debug_wire = false;
  learners::LearnerConfig learner;
  ExperimentOptions options;
};

/// "baseline:<name>", "chat:<model>", "scripted" or "scripted:<file>".
/// Throws ConfigError.
void apply_learner_spec(learners::LearnerConfig& cfg, const std::string& spec);
std::string learner_spec(const learners::LearnerConfig& cfg);

/// Reads the INI config; unknown sections or keys are a ConfigError.
SuiteSettings load_settings(const std::filesystem::path& path);
SuiteSettings default_settings();

/// Default replies of the scripted learner: every experiment gets some
/// parseable answers.
const std::vector<std::string>& default_script();

/// Repetition schedule for one condition:
///   morphology    3 paragraph orders x 5 runs
///   morphosyntax  5 runs, one stimulus set each
///   syntax        3 stimulus seeds x 5 runs
/// runs_per_cell replaces the total (orders still cycle over 3 where used).
std::vector<RunConfig> schedule(const ConditionId& condition, const SuiteSettings& s);

/// Schedule for every condition of an experiment, in canonical order.
std::vector<RunConfig> schedule(Experiment e, const SuiteSettings& s,
                                const std::vector<std::string>& conditions = {});

int default_runs(Experiment e);

}  // namespace implang::harness
