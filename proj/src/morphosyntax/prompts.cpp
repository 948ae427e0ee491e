#include "implang/morphosyntax/prompts.hpp"

namespace implang::morphosyntax {

std::string starting_prompt() {
  return "Let's play a game. In this game, you'll see sentences from an artificial language, "
         "that composed of nonsense words that had no meanings. The game consists of the one "
         "learning round and four testing rounds. In learning round, I will present you some "
         "sentences in this language. You can simply acknowledge by saying 'I'm ready.' In the "
         "testing round, I will present you some more sentences and you'll need to judge if "
         "these sentences are correct or incorrect. In the testing round, all the sentences are "
         "presented one by one and you need to answer one by one. Last, I will ask you some "
         "questions about this game.";
}

std::string learning_prompt(const std::vector<MsSentence>& training) {
  std::string joined;
  for (std::size_t i = 0; i < training.size(); ++i) {
    if (i) joined += ". ";
    joined += training[i].text();
  }
  return "Now it's the learning round. I will present you some sentences in this artificial "
         "language. You can acknowledge by replying 'I'm ready for the testing round'. " +
         joined + ".";
}

std::string testing_start_prompt(int round, const std::string& sentence) {
  return "OK. Now it's testing round " + std::to_string(round) +
         ". Judge whether the test sentence is correct or incorrect in this artificial language. "
         "Answer 'correct or incorrect'. " +
         sentence + ".";
}

std::string testing_item_prompt(const std::string& sentence) { return sentence + "."; }

std::string testing_end_prompt(int round) {
  return "OK. Now test round " + std::to_string(round) +
         " is over. Take some time to reflect. We are about to start the next round.";
}

std::vector<std::string> post_testing_prompts() {
  return {
      "OK. Now all test rounds are over. Let's reflect on this game. How did you judge whether "
      "a sentence is correct or incorrect?",
      "Can you tell me more about the patterns you observed?",
  };
}

std::string correction_prompt(const std::string& incorrect_sentence) {
  return "Let's review some answers. " + incorrect_sentence +
         " is incorrect. Can you tell me why it's incorrect? How would you fix it to be correct?";
}

}  // namespace implang::morphosyntax
