#include "implang/morphology/scoring.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "implang/core/csv.hpp"
#include "implang/core/text.hpp"
#include "implang/morphology/lexicon.hpp"

namespace implang::morphology {

namespace {

constexpr std::size_t kMaxSuffix = 4;

bool all_alpha(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

}  // namespace

std::optional<std::string> parse_plural_response(std::string_view raw, std::string_view noun) {
  const auto tokens = text::words(raw);
  const std::string n = text::lower(noun);
  if (n.empty()) return std::nullopt;

  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    const std::string& tok = *it;
    if (tok.size() > n.size() && tok.compare(0, n.size(), n) == 0) {
      const std::string suffix = tok.substr(n.size());
      if (suffix.size() <= kMaxSuffix && all_alpha(suffix)) return suffix;
    }
  }
  if (tokens.size() == 1) {
    const std::string& tok = tokens.front();
    if (tok != n && tok.size() <= kMaxSuffix && all_alpha(tok)) return tok;
  }
  return std::nullopt;
}

RegularizationScore score_regularization(std::span<const TrialRecord> records) {
  RegularizationScore s{0.0, 0, 0, 0};
  for (const auto& r : records) {
    if (!r.parseable()) {
      ++s.unparseable;
      continue;
    }
    ++s.parseable;
    if (*r.parsed() == kRegularMarker) ++s.regular;
  }
  if (s.parseable == 0) throw std::domain_error("no parseable trials: run is invalid");
  s.rate = static_cast<double>(s.regular) / s.parseable;
  return s;
}

namespace {

constexpr std::array<std::string_view, 16> kPatternCues{
    "most common", "most frequent", "most frequently", "most often", "default",
    "regular",     "general rule",  "majority",        "typical",    "typically",
    "usually",     "standard",      "generally",       "productive", "common suffix",
    "common ending"};

constexpr std::array<std::string_view, 8> kNegations{
    "no", "not", "never", "without", "arbitrary", "random", "didn't", "couldn't"};

std::vector<std::string> sentences(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '.' || c == '!' || c == '?' || c == '\n' || c == ';') {
      if (!text::trim(cur).empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!text::trim(cur).empty()) out.push_back(cur);
  return out;
}

bool has_cue(std::string_view sentence) {
  return std::any_of(kPatternCues.begin(), kPatternCues.end(),
                     [&](std::string_view cue) { return text::contains_word(sentence, cue); });
}

bool negated(std::string_view sentence) {
  return std::any_of(kNegations.begin(), kNegations.end(),
                     [&](std::string_view w) { return text::contains_word(sentence, w); });
}

}  // namespace

ExplicitKnowledge annotate_explicit_knowledge(std::span<const std::string> responses) {
  ExplicitKnowledge k;
  for (const auto& response : responses) {
    for (const auto& sentence : sentences(response)) {
      if (!has_cue(sentence) || negated(sentence)) continue;
      k.recognized_pattern = 1;
      if (text::contains_word(sentence, kRegularMarker)) k.identified_ka = 1;
    }
  }
  return k;
}

std::map<std::string, ExplicitKnowledge> read_annotation_overrides(std::istream& in) {
  std::map<std::string, ExplicitKnowledge> out;
  const auto rows = read_csv(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i == 0 && !row.empty() && row[0] == "run_id") continue;
    if (row.size() == 1 && text::trim(row[0]).empty()) continue;
    if (row.size() != 3) {
      throw std::runtime_error("annotation override row " + std::to_string(i + 1) +
                               ": expected 3 fields");
    }
    auto flag = [&](const std::string& v) {
      const std::string t = text::trim(v);
      if (t == "0") return 0;
      if (t == "1") return 1;
      throw std::runtime_error("annotation override row " + std::to_string(i + 1) +
                               ": flags must be 0 or 1");
    };
    out[text::trim(row[0])] = ExplicitKnowledge{flag(row[1]), flag(row[2])};
  }
  return out;
}

ExplicitKnowledge annotate_explicit_knowledge(
    std::string_view run_id, std::span<const std::string> responses,
    const std::map<std::string, ExplicitKnowledge>* overrides) {
  if (overrides) {
    if (const auto it = overrides->find(std::string(run_id)); it != overrides->end()) {
      return it->second;
    }
  }
  return annotate_explicit_knowledge(responses);
}

}  // namespace implang::morphology
