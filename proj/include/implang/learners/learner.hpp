#pragma once

#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "implang/core/rng.hpp"
#include "implang/core/transcript.hpp"

namespace implang::learners {

struct ChatMessage {
  Role role;
  std::string content;
};

// --- structured exposure ---------------------------------------------------

struct PluralToken {
  std::string noun;
  std::optional<std::string> marker;  // empty for singular mentions
};

/// Noun occurrences of one learning paragraph.
struct MorphExposure {
  std::vector<PluralToken> tokens;
};

/// A sentence shown during learning: training items carry grammatical=true,
/// feedback turns carry the revealed label.
struct SentenceExposure {
  std::string sentence;
  std::optional<bool> grammatical;
};

using StructuredEvent = std::variant<MorphExposure, SentenceExposure>;

// --- structured queries and their single response schema each --------------

struct PluralQuery {  // -> MarkerAnswer
  std::string noun;
  std::string number_word;
};
struct JudgmentQuery {  // correct / incorrect -> JudgmentAnswer
  std::string sentence;
};
struct YesNoQuery {  // -> YesNoAnswer
  std::string sentence;
};
struct QuestionnaireQuery {  // -> LettersAnswer
  int n_questions = 7;
  std::vector<char> alphabet;
};
struct OpenQuery {  // free-text probe -> TextAnswer
  std::optional<std::string> sentence;  // the sentence under discussion, if any
};

using StructuredQuery =
    std::variant<PluralQuery, JudgmentQuery, YesNoQuery, QuestionnaireQuery, OpenQuery>;

struct MarkerAnswer {
  std::string marker;
};
struct JudgmentAnswer {
  bool correct;
};
struct YesNoAnswer {
  bool yes;
};
struct LettersAnswer {
  std::vector<std::set<char>> answers;
};
struct TextAnswer {
  std::string text;
};
struct Refusal {};

using StructuredAnswer =
    std::variant<Refusal, MarkerAnswer, JudgmentAnswer, YesNoAnswer, LettersAnswer, TextAnswer>;

/// Text a baseline "says" for an answer. The experiment parsers invert this.
std::string render_answer(const StructuredQuery& query, const StructuredAnswer& answer);

inline constexpr const char* kRefusalText = "I am not sure.";
inline constexpr const char* kAckText = "OK.";

/// What the harness sends on one user turn: the rendered text plus the same
/// content in structured form.
struct Prompt {
  std::string text;
  std::vector<StructuredEvent> events;
  std::optional<StructuredQuery> query;
};

/// A learner produces exactly one assistant reply per prompt. Throwing
/// LearnerError fails the run.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string reply(std::span<const ChatMessage> history, const Prompt& prompt) = 0;
  virtual std::string describe() const = 0;
};

/// One conversation. send() appends the user turn and the reply together,
/// or nothing if the learner throws.
class TextSession {
 public:
  explicit TextSession(Learner& learner) : learner_(&learner) {}

  std::string send(const Prompt& prompt);
  const std::vector<ChatMessage>& history() const { return history_; }

 private:
  Learner* learner_;
  std::vector<ChatMessage> history_;
};

/// Baselines consume structured payloads and never parse prompt text.
class StructuredLearner {
 public:
  virtual ~StructuredLearner() = default;
  virtual void observe(const StructuredEvent& event) = 0;
  virtual StructuredAnswer answer(const StructuredQuery& query, Rng& rng) = 0;
  virtual std::string name() const = 0;
};

/// Adapts a StructuredLearner to the text contract.
class BaselineLearner : public Learner {
 public:
  BaselineLearner(std::unique_ptr<StructuredLearner> inner, std::uint64_t seed);

  std::string reply(std::span<const ChatMessage> history, const Prompt& prompt) override;
  std::string describe() const override { return "baseline:" + inner_->name(); }

 private:
  std::unique_ptr<StructuredLearner> inner_;
  Rng rng_;
};

}  // namespace implang::learners
