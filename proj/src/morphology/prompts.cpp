#include "implang/morphology/prompts.hpp"

#include <stdexcept>

#include "implang/core/text.hpp"

namespace implang::morphology {

std::string starting_prompt() {
  return "Let's play a game. In this game, you'll see words from an artificial language. These "
         "words have no meaning. The game consists of a learning round and a testing round. In "
         "the learning round, I will present you some sentences containing the words from this "
         "artificial language. In the testing round, I will present you some more sentences "
         "containing the words from this artificial language and you'll need to fill in the "
         "blank. Last, I will ask you some questions about this game.";
}

std::string learning_prompt(const std::vector<std::string>& paragraphs) {
  return "Now it's the learning round. I will present you some sentences in this artificial "
         "language. You can acknowledge by replying 'I'm ready for the testing round.' " +
         text::join(paragraphs, "\n\n");
}

std::string testing_prompt(const std::string& noun, const std::string& number) {
  return "Now it's testing round. Fill in the blank for the following sentence, just reply the "
         "word for the blank: 'Where is my " +
         noun + "?' 'Which one are you talking about? You have " + number + " ___.'";
}

std::vector<std::string> post_testing_prompts() {
  return {
      "OK. Now the testing round is over. Let's reflect on this game. How did you decide the "
      "word for the blank in the testing round?",
      "Can you tell me more about the patterns you observed?",
  };
}

std::string render_phase_prompt(Phase phase, const PromptSlots& slots) {
  switch (phase) {
    case Phase::starting:
      return starting_prompt();
    case Phase::learning:
      if (!slots.paragraphs) throw std::invalid_argument("learning prompt needs {paragraphs}");
      return learning_prompt(*slots.paragraphs);
    case Phase::testing:
      if (!slots.noun) throw std::invalid_argument("testing prompt needs {noun}");
      if (!slots.number) throw std::invalid_argument("testing prompt needs {number}");
      return testing_prompt(*slots.noun, *slots.number);
    case Phase::post_testing: {
      const auto probes = post_testing_prompts();
      if (slots.probe < 1 || slots.probe > static_cast<int>(probes.size())) {
        throw std::invalid_argument("post-testing probe must be 1 or 2");
      }
      return probes[static_cast<std::size_t>(slots.probe - 1)];
    }
  }
  throw std::invalid_argument("unknown phase");
}

}  // namespace implang::morphology
