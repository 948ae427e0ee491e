#include "implang/learners/baselines.hpp"

#include <algorithm>
#include <sstream>

#include "implang/core/errors.hpp"

namespace implang::learners {

namespace {

std::vector<std::string> tokens_of(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_grammatical_exposure(const StructuredEvent& event) {
  const auto* s = std::get_if<SentenceExposure>(&event);
  return s && s->grammatical.value_or(false);
}

StructuredAnswer decide(const StructuredQuery& query, bool verdict) {
  if (std::holds_alternative<JudgmentQuery>(query)) return JudgmentAnswer{verdict};
  if (std::holds_alternative<YesNoQuery>(query)) return YesNoAnswer{verdict};
  return Refusal{};
}

const std::string* sentence_of(const StructuredQuery& query) {
  if (const auto* j = std::get_if<JudgmentQuery>(&query)) return &j->sentence;
  if (const auto* y = std::get_if<YesNoQuery>(&query)) return &y->sentence;
  return nullptr;
}

}  // namespace

void FrequencyMatching::observe(const StructuredEvent& event) {
  if (const auto* m = std::get_if<MorphExposure>(&event))
    for (const auto& t : m->tokens)
      if (t.marker) ++counts_[*t.marker];
}

StructuredAnswer FrequencyMatching::answer(const StructuredQuery& query, Rng& rng) {
  if (!std::holds_alternative<PluralQuery>(query) || counts_.empty()) return Refusal{};
  int total = 0;
  for (const auto& [m, c] : counts_) total += c;
  auto r = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(total)));
  for (const auto& [m, c] : counts_) {
    if (r < c) return MarkerAnswer{m};
    r -= c;
  }
  return MarkerAnswer{counts_.rbegin()->first};
}

void MajorityType::observe(const StructuredEvent& event) {
  if (const auto* m = std::get_if<MorphExposure>(&event))
    for (const auto& t : m->tokens)
      if (t.marker) marker_of_.try_emplace(t.noun, *t.marker);
}

std::string MajorityType::majority_marker() const {
  std::map<std::string, int> types;
  for (const auto& [noun, m] : marker_of_) ++types[m];
  std::string best;
  int best_n = 0;
  for (const auto& [m, n] : types)
    if (n > best_n) best = m, best_n = n;  // map order breaks ties lexicographically
  return best;
}

StructuredAnswer MajorityType::answer(const StructuredQuery& query, Rng&) {
  if (!std::holds_alternative<PluralQuery>(query) || marker_of_.empty()) return Refusal{};
  return MarkerAnswer{majority_marker()};
}

void ExemplarJudge::observe(const StructuredEvent& event) {
  if (!is_grammatical_exposure(event)) return;
  auto words = tokens_of(std::get<SentenceExposure>(event).sentence);
  if (seen_.insert(words).second) exemplars_.push_back(std::move(words));
}

StructuredAnswer ExemplarJudge::answer(const StructuredQuery& query, Rng&) {
  if (const auto* s = sentence_of(query)) return decide(query, seen_.count(tokens_of(*s)) > 0);
  if (const auto* open = std::get_if<OpenQuery>(&query)) {
    if (!open->sentence || exemplars_.empty())
      return TextAnswer{"I compared each sentence with the examples I had seen."};
    // nearest exemplar by word-position mismatches, earliest on ties
    const auto target = tokens_of(*open->sentence);
    const std::vector<std::string>* best = nullptr;
    std::size_t best_d = 0;
    for (const auto& e : exemplars_) {
      std::size_t d = std::max(e.size(), target.size());
      for (std::size_t i = 0; i < std::min(e.size(), target.size()); ++i) d -= e[i] == target[i];
      if (!best || d < best_d) best = &e, best_d = d;
    }
    std::string fixed;
    for (const auto& w : *best) fixed += (fixed.empty() ? "" : " ") + w;
    return TextAnswer{"It should be '" + fixed + "'."};
  }
  return Refusal{};
}

void Bigram::observe(const StructuredEvent& event) {
  if (!is_grammatical_exposure(event)) return;
  std::string prev = "<s>";
  for (auto& w : tokens_of(std::get<SentenceExposure>(event).sentence)) {
    bigrams_.emplace(prev, w);
    prev = std::move(w);
  }
  bigrams_.emplace(prev, "</s>");
}

bool Bigram::accepts(const std::string& sentence) const {
  std::string prev = "<s>";
  for (auto& w : tokens_of(sentence)) {
    if (!bigrams_.count({prev, w})) return false;
    prev = std::move(w);
  }
  return bigrams_.count({prev, "</s>"}) > 0;
}

StructuredAnswer Bigram::answer(const StructuredQuery& query, Rng&) {
  if (const auto* s = sentence_of(query)) return decide(query, accepts(*s));
  return Refusal{};
}

void RandomResponder::observe(const StructuredEvent& event) {
  if (const auto* m = std::get_if<MorphExposure>(&event))
    for (const auto& t : m->tokens)
      if (t.marker) markers_.insert(*t.marker);
}

StructuredAnswer RandomResponder::answer(const StructuredQuery& query, Rng& rng) {
  if (std::holds_alternative<PluralQuery>(query)) {
    if (markers_.empty()) return Refusal{};
    return MarkerAnswer{*std::next(markers_.begin(),
                                   static_cast<long>(rng.uniform_below(markers_.size())))};
  }
  if (sentence_of(query)) return decide(query, rng.bernoulli(0.5));
  if (const auto* q = std::get_if<QuestionnaireQuery>(&query)) {
    if (q->alphabet.empty()) return Refusal{};
    LettersAnswer a;
    for (int i = 0; i < q->n_questions; ++i)
      a.answers.push_back({q->alphabet[rng.uniform_below(q->alphabet.size())]});
    return a;
  }
  return Refusal{};
}

std::unique_ptr<StructuredLearner> make_baseline(const std::string& name) {
  if (name == "frequency" || name == "frequency-matching") return std::make_unique<FrequencyMatching>();
  if (name == "majority" || name == "majority-type") return std::make_unique<MajorityType>();
  if (name == "exemplar") return std::make_unique<ExemplarJudge>();
  if (name == "bigram") return std::make_unique<Bigram>();
  if (name == "random") return std::make_unique<RandomResponder>();
  throw ConfigError("unknown baseline: " + name);
}

std::vector<std::string> baseline_names() {
  return {"frequency", "majority", "exemplar", "bigram", "random"};
}

}  // namespace implang::learners
