#pragma once

#include <optional>
#include <string>
#include <vector>

#include "implang/core/errors.hpp"
#include "implang/learners/learner.hpp"

namespace implang::learners {

/// Replies from a fixed list, cycling. With fail_after = n the learner
/// throws LearnerError on exchange n+1 (so the transcript keeps 2n turns).
class ScriptedLearner : public Learner {
 public:
  explicit ScriptedLearner(std::vector<std::string> replies, std::optional<int> fail_after = {});

  std::string reply(std::span<const ChatMessage> history, const Prompt& prompt) override;
  std::string describe() const override { return "scripted"; }

  int served() const { return served_; }

 private:
  std::vector<std::string> replies_;
  std::optional<int> fail_after_;
  int served_ = 0;
};

/// Reads replies from a file: a JSON array of strings, or one reply per line.
std::vector<std::string> load_script(const std::string& path);

/// Raised when a replayed prompt differs from the recorded one.
class ReplayMismatch : public LearnerError {
 public:
  using LearnerError::LearnerError;
};

/// Plays back recorded assistant turns so a transcript can be re-scored
/// without network access. In strict mode every incoming prompt must match
/// the recording; otherwise differences are only counted (a parser change can
/// alter feedback text in the syntax experiment).
class ReplayLearner : public Learner {
 public:
  struct Exchange {
    std::string user;
    std::string assistant;
  };

  explicit ReplayLearner(std::vector<Exchange> exchanges, bool strict = true)
      : exchanges_(std::move(exchanges)), strict_(strict) {}

  std::string reply(std::span<const ChatMessage> history, const Prompt& prompt) override;
  std::string describe() const override { return "replay"; }

  bool exhausted() const { return next_ == exchanges_.size(); }
  int mismatches() const { return mismatches_; }

 private:
  std::vector<Exchange> exchanges_;
  bool strict_;
  std::size_t next_ = 0;
  int mismatches_ = 0;
};

}  // namespace implang::learners
