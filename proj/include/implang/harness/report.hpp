#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "implang/analysis/references.hpp"
#include "implang/analysis/stats.hpp"
#include "implang/harness/experiments.hpp"

namespace implang::harness {

struct RunRecord {
  std::string run_id;
  std::string condition;
  Json metrics;
};

struct Aggregates {
  Experiment experiment;
  std::string learner;  // from the manifests; "mixed" if they differ
  std::vector<RunRecord> runs;  // completed runs, sorted by run id
  std::vector<std::string> failed;
};

/// Reads every manifest under <out>/<experiment>/runs.
Aggregates load_aggregates(Experiment e, const std::filesystem::path& out_dir);

struct StatRow {
  std::string condition;
  analysis::StatResult result;
  std::string note;
};

struct Analysis {
  std::vector<StatRow> stats;
  std::vector<analysis::ComparisonRow> comparisons;
};

inline constexpr int kPermutations = 10'000;

/// Deterministic: permutation streams are seeded from fixed labels.
Analysis analyze(const Aggregates& agg);

struct ReportFiles {
  std::string markdown;
  std::string stats_csv;
  std::string runs_csv;
  std::string comparison_csv;
  std::vector<std::pair<std::string, std::string>> svgs;  // file name, content
};

/// Throws std::runtime_error when no run completed.
ReportFiles render_report(const Aggregates& agg, const Analysis& an);

/// Writes report.md, stats.csv, runs.csv, comparison.csv and the charts
/// into `dir` and returns what was written.
ReportFiles emit_report(const Aggregates& agg, const std::filesystem::path& dir);

std::string stats_csv(const Experiment e, const Analysis& an);

}  // namespace implang::harness
