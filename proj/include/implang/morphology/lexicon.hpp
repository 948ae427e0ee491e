#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/condition.hpp"
#include "implang/core/rng.hpp"

namespace implang::morphology {

inline constexpr std::string_view kRegularMarker = "ka";

struct NonceNoun {
  std::string surface;
  int rank;
  int total_frequency;
  int plural_count;
  std::string marker_5r4e;
  std::string marker_3r6e;

  int singular_count() const { return total_frequency - plural_count; }
};

/// The nine training nouns with their Zipfian token counts and both marker columns.
const std::vector<NonceNoun>& frequency_table();

struct MorphLexicon {
  std::string condition;  // "5R4E" or "3R6E"
  std::vector<NonceNoun> nouns;

  /// Plural marker of `noun` in this condition. Throws std::out_of_range.
  const std::string& marker_for(std::string_view noun) const;
  /// Distinct markers in rank order of first use; "ka" first.
  std::vector<std::string> markers() const;
  int total_tokens() const;
  int plural_tokens() const;
};

/// Throws std::invalid_argument for labels other than 5R4E / 3R6E.
MorphLexicon build_lexicon(std::string_view condition);
MorphLexicon build_lexicon(const ConditionId& condition);

/// Share of plural tokens that carry the regular marker.
double input_regular_token_fraction(const MorphLexicon& lex);

/// One noun occurrence in the learning text; `marker` empty for singulars.
struct NounToken {
  std::string noun;
  std::optional<std::string> marker;
};

struct Paragraph {
  std::string noun;  // the noun the template is about
  std::string text;
  std::vector<NounToken> tokens;  // in order of appearance
};

/// Raw paragraph templates with literal "[marker]" slots, keyed by noun.
struct ParagraphTemplate {
  std::string noun;
  std::string text;
};
const std::vector<ParagraphTemplate>& paragraph_templates();

/// Fills each template with the condition's markers and returns the 13
/// paragraphs in a seeded order. Throws std::invalid_argument if a template
/// noun is missing from the lexicon.
std::vector<Paragraph> render_learning_paragraphs(const MorphLexicon& lex, Rng& rng);

/// Unseen nouns used at test time.
const std::vector<std::string>& test_nouns();

struct TestItem {
  std::string noun;
  std::string number_word;
};

/// Twelve items: each test noun twice, shuffled, with a number in two..nine.
std::vector<TestItem> build_test_items(Rng& rng);

}  // namespace implang::morphology
