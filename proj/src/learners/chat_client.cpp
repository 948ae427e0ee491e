#include "implang/learners/chat_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <regex>

#include "implang/core/errors.hpp"

namespace implang::learners {

using nlohmann::json;

std::chrono::milliseconds BackoffPolicy::delay(int attempt, Rng& rng) const {
  double ms = static_cast<double>(initial.count()) * std::pow(factor, attempt);
  ms = std::min(ms, static_cast<double>(cap.count()));
  ms *= 1.0 - jitter + 2.0 * jitter * rng.uniform01();
  ms = std::min(ms, static_cast<double>(cap.count()));
  return std::chrono::milliseconds(static_cast<long long>(std::llround(ms)));
}

std::string to_string(LearnerConfig::Kind k) {
  switch (k) {
    case LearnerConfig::Kind::remote_chat: return "remote_chat";
    case LearnerConfig::Kind::baseline: return "baseline";
    case LearnerConfig::Kind::scripted: return "scripted";
  }
  return "?";
}

void LearnerConfig::validate() const {
  if (!(temperature >= 0)) throw ConfigError("temperature must be >= 0");
  if (!(top_p > 0 && top_p <= 1)) throw ConfigError("top_p must be in (0, 1]");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (!(timeout_s > 0)) throw ConfigError("timeout must be > 0");
  if (reasoning_effort && *reasoning_effort != "low" && *reasoning_effort != "medium" &&
      *reasoning_effort != "high")
    throw ConfigError("reasoning_effort must be low, medium or high");
  if (kind == Kind::remote_chat) {
    if (endpoint.empty()) throw ConfigError("remote_chat learner needs an endpoint");
    if (model_name.empty()) throw ConfigError("remote_chat learner needs a model name");
  }
}

RequestLimiter::RequestLimiter(int limit) : limit_(limit) {
  if (limit < 1) throw std::invalid_argument("limiter width must be >= 1");
}

RequestLimiter::Slot::~Slot() {
  if (owner_) owner_->release();
}

RequestLimiter::Slot RequestLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < limit_; });
  peak_ = std::max(peak_, ++in_flight_);
  return Slot(this);
}

void RequestLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

int RequestLimiter::in_flight() const {
  std::lock_guard lock(mu_);
  return in_flight_;
}

int RequestLimiter::peak() const {
  std::lock_guard lock(mu_);
  return peak_;
}

HttpReply httplib_post(const std::string& endpoint,
                       const std::map<std::string, std::string>& headers,
                       const std::string& body, double timeout_s) {
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint, m, url)) throw ConfigError("bad endpoint URL: " + endpoint);
  httplib::Client client(m[1].str());
  const auto t = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
  client.set_connection_timeout(t);
  client.set_read_timeout(t);
  client.set_write_timeout(t);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  const std::string path = m[2].matched ? m[2].str() : "/";
  auto res = client.Post(path, h, body, "application/json");
  if (!res) return {0, "", httplib::to_string(res.error())};
  return {res->status, res->body, ""};
}

std::string parse_completion(const std::string& body) {
  try {
    const auto j = json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ProtocolError("completion content is not a string");
    return content.get<std::string>();
  } catch (const ProtocolError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("malformed completion (") + e.what() + "): " + body);
  }
}

RemoteChatBackend::RemoteChatBackend(LearnerConfig config, Options options)
    : config_(std::move(config)), options_(std::move(options)), jitter_rng_(options_.jitter_seed) {
  config_.validate();
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (!key || !*key) throw ConfigError("credential variable " + config_.api_key_env + " is not set");
  api_key_ = key;
  if (!options_.limiter) options_.limiter = std::make_shared<RequestLimiter>(config_.max_in_flight);
}

std::string RemoteChatBackend::request_body(std::span<const ChatMessage> history,
                                            const std::string& user_text) const {
  json messages = json::array();
  for (const auto& m : history)
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  messages.push_back({{"role", "user"}, {"content", user_text}});
  json body = {{"model", config_.model_name}, {"messages", messages}};
  if (config_.reasoning_effort) {
    // reasoning models reject sampling fields
    body["reasoning_effort"] = *config_.reasoning_effort;
  } else {
    body["temperature"] = config_.temperature;
    body["top_p"] = config_.top_p;
  }
  return body.dump();
}

std::string RemoteChatBackend::reply(std::span<const ChatMessage> history, const Prompt& prompt) {
  const std::string body = request_body(history, prompt.text);
  const std::map<std::string, std::string> headers{{"Authorization", "Bearer " + api_key_}};
  if (options_.wire_log)
    *options_.wire_log << "> POST " << config_.endpoint << " Authorization: Bearer [redacted]\n"
                       << "> " << body << '\n';
  std::string last_error;
  for (int attempt = 0;; ++attempt) {
    HttpReply r;
    {
      auto slot = options_.limiter->acquire();
      r = options_.post(config_.endpoint, headers, body, config_.timeout_s);
    }
    if (options_.wire_log)
      *options_.wire_log << "< " << r.status << ' ' << (r.status ? r.body : r.error) << '\n';
    const bool retryable = r.status == 0 || r.status == 429 || r.status >= 500;
    if (r.status == 200) {
      try {
        return parse_completion(r.body);
      } catch (const ProtocolError& e) {
        if (options_.wire_log) *options_.wire_log << "! " << e.what() << '\n';
        throw;
      }
    }
    if (!retryable) throw LearnerError("HTTP " + std::to_string(r.status) + ": " + r.body);
    last_error = r.status ? "HTTP " + std::to_string(r.status) : r.error;
    if (attempt >= config_.max_retries)
      throw RetriesExhausted("gave up after " + std::to_string(attempt + 1) +
                             " attempts: " + last_error);
    ++retries_used_;
    options_.sleep(config_.backoff.delay(attempt, jitter_rng_));
  }
}

}  // namespace implang::learners
