#include "implang/fsg/generation.hpp"

#include <stdexcept>

namespace implang::fsg {

bool feasible(const Fsg& g, LengthRange range) {
  if (range.min < 0 || range.max < range.min) return false;
  std::vector<bool> current(static_cast<std::size_t>(g.num_states()), false);
  current[static_cast<std::size_t>(g.start())] = true;
  for (int len = 0; len <= range.max; ++len) {
    if (len >= range.min) {
      for (int s = 0; s < g.num_states(); ++s) {
        if (current[static_cast<std::size_t>(s)] && g.is_exit(s)) return true;
      }
    }
    std::vector<bool> next(current.size(), false);
    for (int s = 0; s < g.num_states(); ++s) {
      if (!current[static_cast<std::size_t>(s)]) continue;
      for (const Edge& e : g.outgoing(s)) next[static_cast<std::size_t>(e.to)] = true;
    }
    current = std::move(next);
  }
  return false;
}

FsgSentence generate_sentence(const Fsg& g, LengthRange range, Rng& rng) {
  if (range.min < 1 || !feasible(g, range)) {
    throw std::invalid_argument("generate_sentence: no accepted string with length in [" +
                                std::to_string(range.min) + "," + std::to_string(range.max) + "]");
  }
  constexpr int kMaxRestarts = 1'000'000;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    int state = g.start();
    std::vector<char> letters;
    for (;;) {
      const int len = static_cast<int>(letters.size());
      if (g.is_exit(state) && len >= range.min && rng.bernoulli(0.5)) {
        return FsgSentence{std::move(letters), true, std::nullopt};
      }
      const auto out = g.outgoing(state);
      if (out.empty()) break;
      const Edge& e = out[static_cast<std::size_t>(rng.uniform_below(out.size()))];
      letters.push_back(e.letter);
      state = e.to;
      if (static_cast<int>(letters.size()) > range.max) break;
    }
  }
  throw std::runtime_error("generate_sentence: restart limit reached");
}

FsgSentence perturb_single_letter(const Fsg& g, const FsgSentence& s, Rng& rng) {
  if (!accepts(g, s.letters)) {
    throw std::invalid_argument("perturb_single_letter: '" + s.text() + "' is not grammatical");
  }
  if (s.letters.empty()) throw std::invalid_argument("perturb_single_letter: empty sentence");
  const auto& alphabet = g.alphabet();
  for (int attempt = 0; attempt < kMaxPerturbAttempts; ++attempt) {
    const auto pos = static_cast<std::size_t>(rng.uniform_below(s.letters.size()));
    std::vector<char> choices;
    for (char c : alphabet) {
      if (c != s.letters[pos]) choices.push_back(c);
    }
    FsgSentence candidate{s.letters, false, s.pair_id};
    candidate.letters[pos] = pick(choices, rng);
    if (!accepts(g, candidate.letters)) return candidate;
  }
  throw std::runtime_error("perturb_single_letter: no ungrammatical variant of '" + s.text() +
                           "' after 100 attempts");
}

std::vector<Block> build_blocks(const Fsg& g, const BlockPlan& plan, Rng& rng) {
  if (plan.n_blocks < 1 || plan.pairs_per_block < 1) {
    throw std::invalid_argument("build_blocks: plan needs at least one block and one pair");
  }
  std::vector<Block> blocks;
  int pair_id = 0;
  for (int b = 0; b < plan.n_blocks; ++b) {
    Block block;
    for (int p = 0; p < plan.pairs_per_block; ++p) {
      FsgSentence good = generate_sentence(g, plan.length, rng);
      good.pair_id = pair_id++;
      FsgSentence bad = perturb_single_letter(g, good, rng);
      block.push_back(std::move(good));
      block.push_back(std::move(bad));
    }
    shuffle_in_place(block, rng);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

}  // namespace implang::fsg
