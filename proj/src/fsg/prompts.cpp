#include "implang/fsg/prompts.hpp"

#include <stdexcept>

namespace implang::fsg {

std::string starting_prompt(const std::vector<char>& vocabulary, int sentences_per_batch) {
  std::string vocab;
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    if (i) vocab += ", ";
    vocab += vocabulary[i];
  }
  return "Let's play a game. In this game you will see sentences from an artificial language. "
         "There are only " +
         std::to_string(vocabulary.size()) + " words in this language: " + vocab +
         ". They don't have meanings. I will show you several batches of sentences. Each batch "
         "contains " +
         std::to_string(sentences_per_batch) +
         " sentences -- half of the sentences are grammatical in this artificial language and "
         "half of the sentences are not. You need to guess if the sentence is grammatical or "
         "not. I'll provide you feedback for each sentences so that you can use the feedback to "
         "improve your guess.";
}

namespace {

std::string feedback_text(const Feedback& prev) {
  return "You answer is " + std::string(prev.answer_correct ? "correct" : "incorrect") + ". " +
         prev.sentence + " is " + (prev.grammatical ? "grammatical" : "ungrammatical") + ". ";
}

}  // namespace

std::string learning_start_prompt(const std::string& current_sentence) {
  return "Guess the following sentence is grammatical or not. Only output yes or no. " +
         current_sentence + ".";
}

std::string learning_middle_prompt(const Feedback& prev, const std::string& current_sentence) {
  return feedback_text(prev) + learning_start_prompt(current_sentence);
}

std::string learning_end_prompt(const Feedback& prev, int batch_n, bool has_next) {
  std::string out = feedback_text(prev) + "Now it's the end of batch " + std::to_string(batch_n) + ".";
  if (has_next) out += " We are about to start batch " + std::to_string(batch_n + 1) + ".";
  return out;
}

std::string render_learning_turn(const std::optional<Feedback>& prev,
                                 const std::optional<std::string>& current_sentence,
                                 std::optional<int> ending_batch, bool has_next) {
  if (!prev) {
    if (!current_sentence) throw std::invalid_argument("learning turn needs {current_sentence}");
    return learning_start_prompt(*current_sentence);
  }
  if (ending_batch) return learning_end_prompt(*prev, *ending_batch, has_next);
  if (!current_sentence) throw std::invalid_argument("learning turn needs {current_sentence}");
  return learning_middle_prompt(*prev, *current_sentence);
}

std::string question7_context(const Fsg& g) { return g.name() == "A" ? "XV" : "MX"; }

std::vector<std::string> questions(const Fsg& g) {
  return {
      "1. Which letter(s) is(are) more likely to be in the first position?",
      "2. Which letter(s) is(are) more likely to be in the last position?",
      "3. Which letter(s) is(are) more likely to be in the second position?",
      "4. Which letter(s) cannot be presented twice consequently (e.g. in position 2 and 3, or "
      "in position 3 and 4, etc)?",
      "5. Which letter(s) is(are) more likely to appear after the letter 'X'?",
      "6. Which letter(s) is(are) more likely to appear after the bigram 'XT'?",
      "7. Which letter(s) is(are) more likely to appear after the bigram '" +
          question7_context(g) + "'?",
  };
}

std::string post_testing_prompt(const std::vector<std::string>& qs) {
  std::string out =
      "Now it's the end of learning phase. Let's take some time to reflect on this game. I will "
      "ask you 7 questions and you need to simply provide the answer to these questions.";
  for (const auto& q : qs) out += "\n" + q;
  return out;
}

}  // namespace implang::fsg
