#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/rng.hpp"
#include "implang/fsg/generation.hpp"

namespace implang::fsg {

struct QuestionTruth {
  std::string question;
  std::set<char> answer;
  /// Corpus distribution behind the answer (for Q4: share of sentences with the doubled letter).
  std::map<char, double> marginal;
  bool exact = false;  // computed from the automaton, not the corpus
};

using Questionnaire = std::array<QuestionTruth, 7>;

inline constexpr int kDefaultQuestionnaireCorpus = 10'000;
inline constexpr int kMinQuestionnaireCorpus = 1'000;

/// Letters of the grammar that can never occur twice in a row: no path p -L-> q -L-> r.
std::set<char> letters_never_doubled(const Fsg& g);

/// Samples `corpus_size` sentences and answers each question with the letters
/// whose probability is strictly above the uniform share 1/|alphabet|.
/// Question 4 is answered exactly. Throws std::invalid_argument when
/// corpus_size < 1000.
Questionnaire questionnaire_ground_truth(const Fsg& g, int corpus_size, Rng& rng,
                                         LengthRange range = {});

/// Single-letter tokens from {X,V,T,J,M,R} mentioned in a reply.
std::set<char> extract_letters(std::string_view reply);

/// Jaccard similarity of the extracted letters and the truth; 1.0 when both are empty.
double grade_answer(std::string_view reply, const std::set<char>& truth);

/// Splits a numbered reply ("1. X\n2. V ...") into `n` answers; questions
/// without a numbered answer get an empty string.
std::vector<std::string> split_numbered_answers(std::string_view reply, int n = 7);

}  // namespace implang::fsg
