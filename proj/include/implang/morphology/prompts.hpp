#pragma once

#include <optional>
#include <string>
#include <vector>

#include "implang/core/transcript.hpp"

namespace implang::morphology {

/// Slot values for render_phase_prompt. Only the slots the phase uses are read.
struct PromptSlots {
  std::optional<std::vector<std::string>> paragraphs;  // learning
  std::optional<std::string> noun;                      // testing
  std::optional<std::string> number;                    // testing
  int probe = 1;                                        // post_testing: 1 or 2
};

std::string starting_prompt();
std::string learning_prompt(const std::vector<std::string>& paragraphs);
std::string testing_prompt(const std::string& noun, const std::string& number);
/// The two post-test probes in the order they are asked.
std::vector<std::string> post_testing_prompts();

/// Throws std::invalid_argument when a slot needed by `phase` is missing.
std::string render_phase_prompt(Phase phase, const PromptSlots& slots);

}  // namespace implang::morphology
