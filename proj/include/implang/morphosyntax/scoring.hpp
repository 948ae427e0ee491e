#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/rng.hpp"
#include "implang/core/trial.hpp"
#include "implang/morphosyntax/generation.hpp"

namespace implang::morphosyntax {

enum class Judgment { correct, incorrect };
std::string_view to_string(Judgment j);

/// Whole-word, case-insensitive. "incorrect" (or "not correct") wins over
/// "correct" since the former contains the latter as a substring.
std::optional<Judgment> parse_judgment(std::string_view raw);

/// TrialRecord plus the morphosyntax labels needed for the error table.
struct MsTrialRecord {
  TrialRecord record;  // ground truth / parsed are "correct" | "incorrect"
  int trial;           // 1..4
  ErrorType error;
  bool novel;          // sentence did not occur in training
};

struct TrialErrors {
  std::array<int, 4> false_positives{};  // by error type 1..4, max 3 each
  int false_negatives = 0;               // max 12
  int unparseable = 0;                   // omissions, not counted as errors
  int total_errors() const;
  int all_false_positives() const;
};

struct MsRunScore {
  std::array<TrialErrors, 4> trials;
  int tp = 0, fp = 0, fn = 0, tn = 0;
  int unparseable = 0;
  double precision = 1.0;  // 1.0 when nothing was judged correct
  double recall = 0.0;
  /// Recall restricted to grammatical items absent from training.
  int novel_tp = 0, novel_fn = 0;
  double novel_recall = 0.0;
};

inline constexpr int kTestItems = 96;

/// "grammatical" is the positive class. Throws std::invalid_argument unless
/// exactly 96 records with trials in 1..4 are given.
MsRunScore score_run(std::span<const MsTrialRecord> records);

/// One ungrammatical sentence per error type for the correction probe.
std::array<LabeledSentence, 4> correction_probe_items(const MsVocabulary& v, Rng& rng,
                                                      Type2Style style = Type2Style::pure);

/// Four-token runs of vocabulary words found in a reply. Quotes, line breaks
/// and sentence punctuation split runs; only runs of exactly four words count.
std::vector<std::array<std::string, 4>> extract_candidates(std::string_view reply,
                                                           const MsVocabulary& v);

struct ProbeGrade {
  int explains = 0;
  int fixes = 0;
};

/// fixes = 1 iff some extracted candidate is grammatical. `explains` is only
/// ever set by a manual override.
ProbeGrade grade_correction(std::string_view reply, const MsVocabulary& v);

/// CSV header run_id,error_type,explains[,fixes]; keyed by (run_id, error type 1..4).
std::map<std::pair<std::string, int>, ProbeGrade> read_probe_overrides(std::istream& in);

}  // namespace implang::morphosyntax
