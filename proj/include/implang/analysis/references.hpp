#pragma once

#include <optional>
#include <string>
#include <vector>

#include "implang/analysis/stats.hpp"
#include "implang/core/condition.hpp"

namespace implang::analysis {

/// One published value. `group` is "human adults", "human children", or a
/// model name for values reported by the replication (reference only).
struct Reference {
  Experiment experiment;
  std::string condition;  // 5R4E / high / grammarA ...
  std::string group;
  std::string statistic;
  double value;
  std::string source;
  std::optional<int> n_trials;  // pooled trials behind a rate, when known
};

inline constexpr const char* kHumanGroup = "human adults";

const std::vector<Reference>& references();

/// Human-reference condition key: morphosyntax subconditions share their
/// frequency level ("high-S2" -> "high").
std::string reference_condition(Experiment e, const std::string& condition_label);

/// Throws std::out_of_range when absent.
const Reference& find_reference(Experiment e, const std::string& condition,
                                const std::string& statistic,
                                const std::string& group = kHumanGroup);

struct LearnerMetric {
  Experiment experiment;
  std::string condition;  // a ConditionId label
  std::string statistic;
  double value;
  std::optional<int> successes;
  std::optional<int> trials;
};

struct ComparisonRow {
  Experiment experiment;
  std::string condition;
  std::string statistic;
  double learner_value;
  double human_value;
  double delta;  // |learner - human|
  std::optional<StatResult> test;
  std::string source;
};

/// Throws std::out_of_range on a metric without a human reference.
std::vector<ComparisonRow> compare_to_human(const std::vector<LearnerMetric>& metrics,
                                            const std::vector<Reference>& refs = references());

}  // namespace implang::analysis
