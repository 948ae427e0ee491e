#include "implang/fsg/questionnaire.hpp"

#include <cctype>
#include <regex>
#include <stdexcept>

#include "implang/fsg/prompts.hpp"

namespace implang::fsg {

std::set<char> letters_never_doubled(const Fsg& g) {
  std::set<char> doubled;
  for (const Edge& first : g.edges()) {
    for (const Edge& second : g.outgoing(first.to)) {
      if (second.letter == first.letter) doubled.insert(first.letter);
    }
  }
  std::set<char> out;
  for (char c : g.alphabet()) {
    if (!doubled.count(c)) out.insert(c);
  }
  return out;
}

namespace {

struct Tally {
  std::map<char, int> counts;
  int total = 0;
  void add(char c) {
    ++counts[c];
    ++total;
  }
};

/// Counts of the letter following each occurrence of `context`.
void tally_after(const std::vector<char>& s, std::string_view context, Tally& t) {
  if (s.size() <= context.size()) return;
  for (std::size_t i = 0; i + context.size() < s.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < context.size(); ++k) match = match && s[i + k] == context[k];
    if (match) t.add(s[i + context.size()]);
  }
}

QuestionTruth from_tally(std::string question, const Tally& t, const Fsg& g) {
  QuestionTruth q;
  q.question = std::move(question);
  const double uniform = 1.0 / static_cast<double>(g.alphabet().size());
  for (char c : g.alphabet()) {
    const double p = t.total == 0 ? 0.0 : static_cast<double>(t.counts.count(c) ? t.counts.at(c) : 0) / t.total;
    q.marginal[c] = p;
    if (p > uniform) q.answer.insert(c);
  }
  return q;
}

}  // namespace

Questionnaire questionnaire_ground_truth(const Fsg& g, int corpus_size, Rng& rng,
                                         LengthRange range) {
  if (corpus_size < kMinQuestionnaireCorpus) {
    throw std::invalid_argument("questionnaire corpus must have at least 1000 sentences");
  }
  Tally first, last, second, after_x, after_xt, after_q7;
  std::map<char, int> doubled_in;
  const std::string q7 = question7_context(g);
  for (int i = 0; i < corpus_size; ++i) {
    const auto s = generate_sentence(g, range, rng).letters;
    first.add(s.front());
    last.add(s.back());
    if (s.size() >= 2) second.add(s[1]);
    tally_after(s, "X", after_x);
    tally_after(s, "XT", after_xt);
    tally_after(s, q7, after_q7);
    std::set<char> seen;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      if (s[k] == s[k + 1]) seen.insert(s[k]);
    }
    for (char c : seen) ++doubled_in[c];
  }

  const auto qs = questions(g);
  Questionnaire out;
  out[0] = from_tally(qs[0], first, g);
  out[1] = from_tally(qs[1], last, g);
  out[2] = from_tally(qs[2], second, g);
  out[3].question = qs[3];
  out[3].answer = letters_never_doubled(g);
  out[3].exact = true;
  for (char c : g.alphabet()) {
    out[3].marginal[c] =
        static_cast<double>(doubled_in.count(c) ? doubled_in.at(c) : 0) / corpus_size;
  }
  out[4] = from_tally(qs[4], after_x, g);
  out[5] = from_tally(qs[5], after_xt, g);
  out[6] = from_tally(qs[6], after_q7, g);
  return out;
}

std::set<char> extract_letters(std::string_view reply) {
  std::set<char> out;
  for (std::size_t i = 0; i < reply.size(); ++i) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(reply[i])));
    if (kLetters.find(c) == std::string_view::npos) continue;
    const bool left = i == 0 || !std::isalnum(static_cast<unsigned char>(reply[i - 1]));
    const bool right = i + 1 >= reply.size() || !std::isalnum(static_cast<unsigned char>(reply[i + 1]));
    if (left && right) out.insert(c);
  }
  return out;
}

double grade_answer(std::string_view reply, const std::set<char>& truth) {
  const auto got = extract_letters(reply);
  if (got.empty() && truth.empty()) return 1.0;
  std::size_t inter = 0;
  for (char c : got) inter += truth.count(c);
  const std::size_t uni = got.size() + truth.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::string> split_numbered_answers(std::string_view reply, int n) {
  std::vector<std::string> out(static_cast<std::size_t>(n));
  // A number at the start of a line, optionally bold / "Q" / "Question", then . ) or :
  static const std::regex kMarker(R"((^|\n)[ \t>*_#-]*(?:Q|Question\s*)?([0-9]+)\s*[.):])",
                                  std::regex::icase);
  const std::string s(reply);
  std::vector<std::pair<int, std::size_t>> starts;  // (question, content offset)
  std::vector<std::size_t> marker_pos;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kMarker); it != std::sregex_iterator(); ++it) {
    const int q = std::stoi((*it)[2].str());
    marker_pos.push_back(static_cast<std::size_t>(it->position(0)));
    starts.emplace_back(q, static_cast<std::size_t>(it->position(0) + it->length(0)));
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto [q, begin] = starts[i];
    const std::size_t end = i + 1 < starts.size() ? marker_pos[i + 1] : s.size();
    if (q >= 1 && q <= n && out[static_cast<std::size_t>(q - 1)].empty()) {
      out[static_cast<std::size_t>(q - 1)] = s.substr(begin, end - begin);
    }
  }
  return out;
}

}  // namespace implang::fsg
