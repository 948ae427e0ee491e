#pragma once

#include <optional>
#include <string>
#include <vector>

#include "implang/fsg/grammar.hpp"

namespace implang::fsg {

std::string starting_prompt(const std::vector<char>& vocabulary, int sentences_per_batch);

/// Outcome of the previous trial, echoed back to the learner.
struct Feedback {
  bool answer_correct;
  std::string sentence;
  bool grammatical;
};

std::string learning_start_prompt(const std::string& current_sentence);
std::string learning_middle_prompt(const Feedback& prev, const std::string& current_sentence);
/// `has_next` false for the final block, which omits the "about to start" clause.
std::string learning_end_prompt(const Feedback& prev, int batch_n, bool has_next);

/// Chooses the template: no feedback -> start; feedback + sentence -> middle;
/// feedback + ending batch -> end. Throws std::invalid_argument otherwise.
std::string render_learning_turn(const std::optional<Feedback>& prev,
                                 const std::optional<std::string>& current_sentence,
                                 std::optional<int> ending_batch = std::nullopt,
                                 bool has_next = true);

/// The seven questionnaire items; item 7 depends on the grammar.
std::vector<std::string> questions(const Fsg& g);
/// Bigram probed by question 7: "XV" for grammar A, "MX" otherwise.
std::string question7_context(const Fsg& g);
std::string post_testing_prompt(const std::vector<std::string>& qs);

}  // namespace implang::fsg
