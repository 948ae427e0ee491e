#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/trial.hpp"

namespace implang::morphology {

/// Extracts the plural suffix a learner supplied for `noun`.
///
/// The reply is lowercased and stripped of punctuation and quotes. Accepted
/// shapes are `<noun><suffix>` anywhere in the reply (the last one wins, so
/// "You have seven sepka." works), or a reply that is nothing but a bare
/// suffix of at most four letters ("ka", "-ka"). Anything else is
/// unparseable. Never throws.
std::optional<std::string> parse_plural_response(std::string_view raw, std::string_view noun);

struct RegularizationScore {
  double rate;  // regular / parseable
  int regular;
  int parseable;
  int unparseable;
};

/// Throws std::domain_error when no record is parseable (the run is invalid).
RegularizationScore score_regularization(std::span<const TrialRecord> records);

struct ExplicitKnowledge {
  int recognized_pattern = 0;
  int identified_ka = 0;
};

/// Sentence-level keyword heuristic over the post-test replies: a sentence
/// that asserts a default / most common / regular ending (and is not negated)
/// marks the pattern as recognized; naming "ka" in such a sentence marks it
/// identified.
ExplicitKnowledge annotate_explicit_knowledge(std::span<const std::string> responses);

/// Manual labels from a CSV with header run_id,recognized_pattern,identified_ka.
/// Throws std::runtime_error on malformed rows.
std::map<std::string, ExplicitKnowledge> read_annotation_overrides(std::istream& in);

/// Heuristic labels unless `overrides` has an entry for `run_id`.
ExplicitKnowledge annotate_explicit_knowledge(
    std::string_view run_id, std::span<const std::string> responses,
    const std::map<std::string, ExplicitKnowledge>* overrides);

}  // namespace implang::morphology
