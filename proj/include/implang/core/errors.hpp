#pragma once

#include <stdexcept>

namespace implang {

/// Bad or missing configuration (exit code 3 in the CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A learner could not produce a reply; the run is marked failed.
class LearnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The remote endpoint answered with something that is not a chat completion.
class ProtocolError : public LearnerError {
 public:
  using LearnerError::LearnerError;
};

/// Transport / 429 / 5xx failures persisted through every retry.
class RetriesExhausted : public LearnerError {
 public:
  using LearnerError::LearnerError;
};

}  // namespace implang
