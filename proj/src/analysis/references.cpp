#include "implang/analysis/references.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace implang::analysis {

namespace {

constexpr const char* kSchuler = "Schuler, Yang & Newport (2017), adult learners";
constexpr const char* kSchulerKids = "Schuler, Yang & Newport (2017), child learners";
constexpr const char* kValian = "Valian & Coulson (1988), mean errors per trial";
constexpr const char* kAlamia = "Alamia et al. (2020), Bayesian RM-ANOVA over blocks";
constexpr const char* kReplication = "reported LLM replication values";

// 10 participants x 12 test trials per condition
constexpr int kMorphHumanTrials = 120;

void add_valian(std::vector<Reference>& out, const std::string& cond,
                const std::array<std::array<double, 5>, 7>& rows) {
  static const std::array<std::string, 7> names = {
      "errors_type1", "errors_type2", "errors_type3", "errors_type4",
      "false_positives", "false_negatives", "total_errors"};
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t t = 0; t < 5; ++t) {
      const std::string col = t < 4 ? "_trial" + std::to_string(t + 1) : "_all";
      out.push_back({Experiment::morphosyntax, cond, kHumanGroup, names[r] + col, rows[r][t], kValian, {}});
    }
}

std::vector<Reference> build() {
  std::vector<Reference> out;
  const auto M = Experiment::morphology;
  out.push_back({M, "5R4E", kHumanGroup, "regularization_rate", 0.650, kSchuler, kMorphHumanTrials});
  out.push_back({M, "3R6E", kHumanGroup, "regularization_rate", 0.517, kSchuler, kMorphHumanTrials});
  out.push_back({M, "5R4E", "human children", "regularization_rate", 0.917, kSchulerKids, {}});
  out.push_back({M, "3R6E", "human children", "regularization_rate", 0.169, kSchulerKids, {}});
  out.push_back({M, "5R4E", "gpt-4o", "regularization_rate", 0.417, kReplication, {}});
  out.push_back({M, "3R6E", "gpt-4o", "regularization_rate", 0.050, kReplication, {}});
  out.push_back({M, "5R4E", "o3-mini", "regularization_rate", 0.756, kReplication, {}});
  out.push_back({M, "3R6E", "o3-mini", "regularization_rate", 0.567, kReplication, {}});
  out.push_back({M, "5R4E", "o3-mini", "runs_identified_ka", 10, kReplication, 15});
  out.push_back({M, "3R6E", "o3-mini", "runs_identified_ka", 7, kReplication, 15});
  out.push_back({M, "5R4E", "gpt-4o", "runs_recognized_pattern", 6, kReplication, 15});
  out.push_back({M, "3R6E", "gpt-4o", "runs_recognized_pattern", 2, kReplication, 15});
  out.push_back({M, "5R4E", "gpt-4o", "runs_identified_ka", 0, kReplication, 15});
  out.push_back({M, "3R6E", "gpt-4o", "runs_identified_ka", 0, kReplication, 15});
  out.push_back({M, "3R6E", "o3-mini", "knowledge_rate_correlation", 0.66, kReplication, 15});
  out.push_back({M, "5R4E", "gpt-4o", "knowledge_rate_correlation", 0.53, kReplication, 15});

  add_valian(out, "high",
             {{{.1, 0, 0, 0, .1},
               {.1, 0, 0, 0, .1},
               {2.8, 2.1, 1.3, 1.0, 7.2},
               {2.5, 1.4, .7, .6, 5.2},
               {5.5, 3.5, 2.0, 1.6, 12.6},
               {1.0, .9, .8, .5, 3.2},
               {6.5, 4.4, 2.8, 2.1, 15.8}}});
  add_valian(out, "low",
             {{{0, 0, 0, 0, 0},
               {.1, 0, 0, 0, .1},
               {2.3, 2.8, 2.6, 2.0, 9.7},
               {2.4, 2.7, 2.3, 1.7, 9.1},
               {4.8, 5.5, 4.9, 3.7, 18.9},
               {1.5, .9, 1.3, 1.7, 5.4},
               {6.3, 6.4, 6.2, 5.4, 24.3}}});

  // reported as "BF >> 100"; stored as the lower bound
  for (const char* g : {"grammarA", "grammarB"})
    out.push_back({Experiment::syntax, g, kHumanGroup, "learning_bf_lower_bound", 100, kAlamia, {}});
  return out;
}

}  // namespace

const std::vector<Reference>& references() {
  static const std::vector<Reference> table = build();
  return table;
}

std::string reference_condition(Experiment e, const std::string& label) {
  if (e == Experiment::morphosyntax) return label.substr(0, label.find('-'));
  return label;
}

const Reference& find_reference(Experiment e, const std::string& condition,
                                const std::string& statistic, const std::string& group) {
  for (const auto& r : references())
    if (r.experiment == e && r.condition == condition && r.statistic == statistic && r.group == group)
      return r;
  throw std::out_of_range("no reference for " + std::string(to_string(e)) + "/" + condition + "/" + statistic +
                          " (" + group + ")");
}

std::vector<ComparisonRow> compare_to_human(const std::vector<LearnerMetric>& metrics,
                                            const std::vector<Reference>& refs) {
  std::vector<ComparisonRow> rows;
  for (const auto& m : metrics) {
    const std::string cond = reference_condition(m.experiment, m.condition);
    const Reference* ref = nullptr;
    for (const auto& r : refs)
      if (r.experiment == m.experiment && r.condition == cond && r.statistic == m.statistic &&
          r.group == kHumanGroup) {
        ref = &r;
        break;
      }
    if (!ref)
      throw std::out_of_range("no human reference for " + std::string(to_string(m.experiment)) + "/" + cond +
                              "/" + m.statistic);
    ComparisonRow row{m.experiment, m.condition, m.statistic, m.value, ref->value,
                      std::abs(m.value - ref->value), std::nullopt, ref->source};
    if (m.successes && m.trials && ref->n_trials) {
      const int hk = static_cast<int>(std::lround(ref->value * *ref->n_trials));
      row.test = two_proportion_test(*m.successes, *m.trials, hk, *ref->n_trials);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace implang::analysis
