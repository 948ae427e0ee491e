#include "implang/fsg/scoring.hpp"

#include <algorithm>
#include <stdexcept>

#include "implang/core/text.hpp"

namespace implang::fsg {

std::optional<bool> parse_yes_no(std::string_view raw) {
  const bool yes = text::contains_word(raw, "yes");
  const bool no = text::contains_word(raw, "no");
  if (yes != no) return yes;
  if (yes && no) return std::nullopt;
  const bool ungrammatical = text::contains_word(raw, "ungrammatical") ||
                             text::contains_word(raw, "not grammatical");
  const bool grammatical = text::contains_word(raw, "grammatical");
  if (ungrammatical) return false;
  if (grammatical) return true;
  return std::nullopt;
}

std::vector<BlockScore> score_blocks(std::span<const SyntaxTrialRecord> records) {
  int n_blocks = 0;
  for (const auto& r : records) {
    if (r.block < 1) throw std::invalid_argument("score_blocks: block numbers start at 1");
    n_blocks = std::max(n_blocks, r.block);
  }
  std::vector<BlockScore> out(static_cast<std::size_t>(n_blocks));
  std::vector<int> correct(static_cast<std::size_t>(n_blocks), 0);
  for (const auto& r : records) {
    const auto b = static_cast<std::size_t>(r.block - 1);
    if (!r.record.parseable()) {
      ++out[b].unparseable;
      continue;
    }
    ++out[b].judged;
    if (*r.record.correct()) ++correct[b];
  }
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b].accuracy = out[b].judged ? static_cast<double>(correct[b]) / out[b].judged : 0.0;
  }
  return out;
}

}  // namespace implang::fsg
