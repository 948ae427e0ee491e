#include "implang/learners/learner.hpp"

namespace implang::learners {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string letters_text(const std::set<char>& letters) {
  if (letters.empty()) return "none";
  std::string out;
  for (char c : letters) {
    if (!out.empty()) out += ", ";
    out += c;
  }
  return out;
}

}  // namespace

std::string render_answer(const StructuredQuery& query, const StructuredAnswer& answer) {
  if (std::holds_alternative<Refusal>(answer)) return kRefusalText;
  return std::visit(
      overloaded{
          [&](const PluralQuery& q) -> std::string {
            return q.noun + std::get<MarkerAnswer>(answer).marker;
          },
          [&](const JudgmentQuery&) -> std::string {
            return std::get<JudgmentAnswer>(answer).correct ? "correct" : "incorrect";
          },
          [&](const YesNoQuery&) -> std::string {
            return std::get<YesNoAnswer>(answer).yes ? "yes" : "no";
          },
          [&](const QuestionnaireQuery&) -> std::string {
            const auto& a = std::get<LettersAnswer>(answer).answers;
            std::string out;
            for (std::size_t i = 0; i < a.size(); ++i) {
              if (i) out += '\n';
              out += std::to_string(i + 1) + ". " + letters_text(a[i]);
            }
            return out;
          },
          [&](const OpenQuery&) -> std::string { return std::get<TextAnswer>(answer).text; },
      },
      query);
}

std::string TextSession::send(const Prompt& prompt) {
  std::string reply = learner_->reply(history_, prompt);
  history_.push_back({Role::user, prompt.text});
  history_.push_back({Role::assistant, reply});
  return reply;
}

BaselineLearner::BaselineLearner(std::unique_ptr<StructuredLearner> inner, std::uint64_t seed)
    : inner_(std::move(inner)), rng_(seed) {}

std::string BaselineLearner::reply(std::span<const ChatMessage>, const Prompt& prompt) {
  for (const auto& e : prompt.events) inner_->observe(e);
  if (!prompt.query) return kAckText;
  return render_answer(*prompt.query, inner_->answer(*prompt.query, rng_));
}

}  // namespace implang::learners
