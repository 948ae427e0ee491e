#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "implang/core/trial.hpp"

namespace implang::fsg {

/// Whole-word yes/no (falling back to grammatical/ungrammatical); nullopt
/// when neither or both answers are given.
std::optional<bool> parse_yes_no(std::string_view raw);

struct SyntaxTrialRecord {
  TrialRecord record;  // ground truth / parsed are "yes" | "no"
  int block;           // 1-based
};

struct BlockScore {
  double accuracy = 0.0;  // correct / judged; 0 when nothing was judged
  int judged = 0;
  int unparseable = 0;
};

/// One entry per block 1..max(block). Unparseable replies are excluded from accuracy.
std::vector<BlockScore> score_blocks(std::span<const SyntaxTrialRecord> records);

}  // namespace implang::fsg
