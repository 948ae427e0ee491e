#include "implang/learners/scripted.hpp"

#include <json.hpp>

#include "implang/core/errors.hpp"
#include "implang/core/files.hpp"
#include "implang/core/text.hpp"

namespace implang::learners {

ScriptedLearner::ScriptedLearner(std::vector<std::string> replies, std::optional<int> fail_after)
    : replies_(std::move(replies)), fail_after_(fail_after) {
  if (replies_.empty()) throw std::invalid_argument("scripted learner needs at least one reply");
}

std::string ScriptedLearner::reply(std::span<const ChatMessage>, const Prompt&) {
  if (fail_after_ && served_ >= *fail_after_)
    throw LearnerError("scripted learner stopped after " + std::to_string(served_) + " replies");
  return replies_[static_cast<std::size_t>(served_++) % replies_.size()];
}

std::vector<std::string> load_script(const std::string& path) {
  const std::string content = read_file(path);
  const std::string head = text::trim(content);
  if (!head.empty() && head.front() == '[') {
    try {
      return nlohmann::json::parse(content).get<std::vector<std::string>>();
    } catch (const std::exception& e) {
      throw ConfigError("bad script file " + path + ": " + e.what());
    }
  }
  std::vector<std::string> out;
  for (auto& line : text::split(content, '\n'))
    if (!text::trim(line).empty()) out.push_back(text::trim(line));
  if (out.empty()) throw ConfigError("script file " + path + " has no replies");
  return out;
}

std::string ReplayLearner::reply(std::span<const ChatMessage>, const Prompt& prompt) {
  if (next_ >= exchanges_.size()) throw ReplayMismatch("transcript has no more assistant turns");
  const auto& ex = exchanges_[next_];
  if (ex.user != prompt.text) {
    if (strict_) throw ReplayMismatch("prompt " + std::to_string(next_) + " differs from the recording");
    ++mismatches_;
  }
  ++next_;
  return ex.assistant;
}

}  // namespace implang::learners
