#pragma once

#include <string>
#include <vector>

#include "implang/morphosyntax/generation.hpp"

namespace implang::morphosyntax {

std::string starting_prompt();
std::string learning_prompt(const std::vector<MsSentence>& training);
/// First item of test round `round` (1-based).
std::string testing_start_prompt(int round, const std::string& sentence);
/// Later items of a round are sent bare.
std::string testing_item_prompt(const std::string& sentence);
std::string testing_end_prompt(int round);
/// The two reflection probes.
std::vector<std::string> post_testing_prompts();
std::string correction_prompt(const std::string& incorrect_sentence);

}  // namespace implang::morphosyntax
