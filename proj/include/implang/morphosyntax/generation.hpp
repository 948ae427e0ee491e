#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/rng.hpp"
#include "implang/morphosyntax/vocabulary.hpp"

namespace implang::morphosyntax {

/// Four tokens: two (slot1, slot2) phrases.
struct MsSentence {
  std::array<std::string, 4> words;

  std::string text() const;
  /// "AB" when the first phrase starts with an a-marker, "BA" for a b-marker, "" otherwise.
  std::string order_tag(const MsVocabulary& v) const;
  friend bool operator==(const MsSentence&, const MsSentence&) = default;
  friend auto operator<=>(const MsSentence&, const MsSentence&) = default;
};

enum class ErrorType { none = 0, order = 1, category = 2, single_assoc = 3, double_assoc = 4 };
inline constexpr std::array<ErrorType, 4> kErrorTypes{ErrorType::order, ErrorType::category,
                                                      ErrorType::single_assoc,
                                                      ErrorType::double_assoc};
std::string_view to_string(ErrorType t);

/// Grammatical iff each phrase is (marker, content) of the same family and
/// one phrase is a-type, the other b-type. Words outside `v` are ungrammatical.
bool is_grammatical(std::span<const std::string> tokens, const MsVocabulary& v);
bool is_grammatical(const MsSentence& s, const MsVocabulary& v);
/// Whitespace-separated convenience overload.
bool is_grammatical(std::string_view sentence, const MsVocabulary& v);

/// Uniformly random grammatical sentence (markers, contents and order independent).
MsSentence sample_grammatical(const MsVocabulary& v, Rng& rng);

/// 24 grammatical sentences with an exact token census (each marker and each
/// content word appears equally often) and 12 AB / 12 BA orders, shuffled.
std::vector<MsSentence> generate_training_set(const MsVocabulary& v, Rng& rng);

enum class Type2Style {
  pure,           // [CC bB]: one phrase's marker replaced, other phrase intact
  as_printed,  // [CC Bb]: additionally reverses the other phrase
};

/// Derives an ungrammatical sentence from a grammatical base.
///   order         reverse one phrase:               [aA bB] -> [aA Bb]
///   category      marker -> same-category content:  [aA bB] -> [AA bB]
///   single_assoc  one content word -> other class:  [aA bB] -> [aB bB]
///   double_assoc  swap the two content words:       [aA bB] -> [aB bA]
/// Throws std::invalid_argument if `base` is not grammatical or `t` is none.
MsSentence make_error(const MsSentence& base, ErrorType t, const MsVocabulary& v, Rng& rng,
                      Type2Style style = Type2Style::pure);

struct LabeledSentence {
  MsSentence sentence;
  ErrorType error = ErrorType::none;
  bool grammatical() const { return error == ErrorType::none; }
};

struct TestSetOptions {
  Type2Style type2 = Type2Style::pure;
  /// Draw grammatical items from this training set instead of resampling.
  const std::vector<MsSentence>* reuse_from = nullptr;
};

inline constexpr int kTestTrials = 4;
inline constexpr int kGrammaticalPerTrial = 12;
inline constexpr int kErrorsPerTypePerTrial = 3;

/// Four trials of 24 items: 12 grammatical + 3 of each error type, shuffled.
std::vector<std::vector<LabeledSentence>> generate_test_set(const MsVocabulary& v, Rng& rng,
                                                            const TestSetOptions& opts = {});

}  // namespace implang::morphosyntax
