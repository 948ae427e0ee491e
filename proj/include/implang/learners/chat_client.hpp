#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>

#include "implang/learners/learner.hpp"

namespace implang::learners {

struct BackoffPolicy {
  std::chrono::milliseconds initial{1000};
  double factor = 2.0;
  std::chrono::milliseconds cap{60000};
  double jitter = 0.25;  // each delay is scaled by a uniform draw in [1-jitter, 1+jitter]

  /// Delay before retry number `attempt` (0-based), capped.
  std::chrono::milliseconds delay(int attempt, Rng& rng) const;
};

struct LearnerConfig {
  enum class Kind { remote_chat, baseline, scripted };

  Kind kind = Kind::baseline;
  std::string model_name;  // baseline name for Kind::baseline
  double temperature = 0.0;
  double top_p = 1.0;
  std::optional<std::string> reasoning_effort;  // low | medium | high
  std::string endpoint;
  double timeout_s = 120.0;
  int max_retries = 5;
  std::string api_key_env = "IMPLANG_API_KEY";
  int max_in_flight = 4;
  BackoffPolicy backoff;
  std::map<std::string, std::string> baseline_params;

  /// Throws ConfigError.
  void validate() const;
};

std::string to_string(LearnerConfig::Kind k);

/// Counting semaphore bounding concurrent requests across sessions.
class RequestLimiter {
 public:
  explicit RequestLimiter(int limit);

  class Slot {
   public:
    explicit Slot(RequestLimiter* owner) : owner_(owner) {}
    Slot(Slot&& o) noexcept : owner_(std::exchange(o.owner_, nullptr)) {}
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;
    Slot& operator=(Slot&&) = delete;
    ~Slot();

   private:
    RequestLimiter* owner_;
  };

  Slot acquire();
  int in_flight() const;
  int peak() const;

 private:
  void release();

  mutable std::mutex mu_;
  std::condition_variable cv_;
  int limit_;
  int in_flight_ = 0;
  int peak_ = 0;
};

struct HttpReply {
  int status = 0;  // 0 means transport failure
  std::string body;
  std::string error;
};

/// POST json body to endpoint. Swappable so tests can script a server.
using HttpPost = std::function<HttpReply(const std::string& endpoint,
                                         const std::map<std::string, std::string>& headers,
                                         const std::string& body, double timeout_s)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

HttpReply httplib_post(const std::string& endpoint,
                       const std::map<std::string, std::string>& headers,
                       const std::string& body, double timeout_s);

/// Chat-completion wire client. The request carries the full history plus
/// the new user turn; the reply is the first choice's message content.
class RemoteChatBackend : public Learner {
 public:
  struct Options {
    std::shared_ptr<RequestLimiter> limiter;
    std::ostream* wire_log = nullptr;  // --debug-wire
    HttpPost post = httplib_post;
    Sleeper sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    std::uint64_t jitter_seed = 0;
  };

  /// Reads the credential now; a missing variable is a ConfigError.
  RemoteChatBackend(LearnerConfig config, Options options);
  explicit RemoteChatBackend(LearnerConfig config) : RemoteChatBackend(std::move(config), Options{}) {}

  std::string reply(std::span<const ChatMessage> history, const Prompt& prompt) override;
  std::string describe() const override { return "remote_chat:" + config_.model_name; }

  std::string request_body(std::span<const ChatMessage> history, const std::string& user_text) const;
  int retries_used() const { return retries_used_; }

 private:
  LearnerConfig config_;
  Options options_;
  std::string api_key_;
  Rng jitter_rng_;
  int retries_used_ = 0;
};

/// Extracts choices[0].message.content; ProtocolError otherwise.
std::string parse_completion(const std::string& body);

}  // namespace implang::learners
