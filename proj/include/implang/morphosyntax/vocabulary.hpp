#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/condition.hpp"

namespace implang::morphosyntax {

enum class WordClass { marker_a, marker_b, content_a, content_b };

bool is_marker(WordClass c);
/// a <-> A, b <-> B pairing used by the grammar.
bool same_family(WordClass marker, WordClass content);

/// The sixteen nonsense words shared by all conditions.
const std::vector<std::string>& inventory();

struct MsVocabulary {
  std::string frequency;    // "high" | "low"
  std::string subcondition; // "S1" | "S2"
  std::vector<std::string> markers_a;
  std::vector<std::string> markers_b;
  std::vector<std::string> content_a;
  std::vector<std::string> content_b;

  /// Class of a word in this vocabulary; nullopt for words outside it.
  std::optional<WordClass> class_of(std::string_view word) const;
  const std::vector<std::string>& words_of(WordClass c) const;
  /// All words in this vocabulary: markers then content.
  std::vector<std::string> words() const;
  std::string label() const { return frequency + "-" + subcondition; }
};

/// Throws std::invalid_argument for unknown frequency / subcondition labels.
MsVocabulary build_vocabulary(std::string_view frequency, std::string_view subcondition);
/// Accepts "high-S1" style condition labels.
MsVocabulary build_vocabulary(const ConditionId& condition);

}  // namespace implang::morphosyntax
