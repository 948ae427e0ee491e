#pragma once

#include <optional>
#include <string>
#include <vector>

#include "implang/core/rng.hpp"
#include "implang/fsg/grammar.hpp"

namespace implang::fsg {

struct LengthRange {
  int min = 4;
  int max = 8;
};

struct FsgSentence {
  std::vector<char> letters;
  bool grammatical = true;
  /// Shared by a grammatical sentence and its one-letter counterpart.
  std::optional<int> pair_id;

  std::string text() const { return render(letters); }
};

/// True iff some accepted string has a length inside the range.
bool feasible(const Fsg& g, LengthRange range);

/// Random walk from start, uniform over outgoing edges. At an exit state with
/// at least `min` letters the walk stops with probability 1/2; a walk that
/// runs past `max` (or dead-ends short of `min`) restarts.
/// Throws std::invalid_argument if the range is infeasible.
FsgSentence generate_sentence(const Fsg& g, LengthRange range, Rng& rng);

inline constexpr int kMaxPerturbAttempts = 100;

/// Replaces one uniformly chosen position with a different letter from the
/// grammar's alphabet, keeping the first candidate the grammar rejects.
/// Throws std::invalid_argument if `s` is not accepted and std::runtime_error
/// when 100 attempts all stay grammatical.
FsgSentence perturb_single_letter(const Fsg& g, const FsgSentence& s, Rng& rng);

struct BlockPlan {
  int n_blocks = 6;
  int pairs_per_block = 10;
  LengthRange length{};

  static BlockPlan reduced() { return {}; }
  static BlockPlan original() { return {8, 30, {}}; }
  int sentences_per_block() const { return 2 * pairs_per_block; }
};

using Block = std::vector<FsgSentence>;

/// Each block holds pairs_per_block grammatical sentences and their
/// counterparts, shuffled. Pair ids are unique across blocks.
std::vector<Block> build_blocks(const Fsg& g, const BlockPlan& plan, Rng& rng);

}  // namespace implang::fsg
