#include "implang/core/transcript.hpp"

#include <chrono>
#include <ctime>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace implang {

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::starting: return "starting";
    case Phase::learning: return "learning";
    case Phase::testing: return "testing";
    case Phase::post_testing: return "post_testing";
  }
  return "?";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "?";
}

Phase parse_phase(std::string_view s) {
  if (s == "starting") return Phase::starting;
  if (s == "learning") return Phase::learning;
  if (s == "testing") return Phase::testing;
  if (s == "post_testing") return Phase::post_testing;
  throw std::invalid_argument("unknown phase '" + std::string(s) + "'");
}

Role parse_role(std::string_view s) {
  if (s == "system") return Role::system;
  if (s == "user") return Role::user;
  if (s == "assistant") return Role::assistant;
  throw std::invalid_argument("unknown role '" + std::string(s) + "'");
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(millis));
  return out;
}

void Transcript::append(Phase phase, Role role, std::string content, std::string timestamp) {
  const int index = turns.empty() ? 0 : turns.back().index + 1;
  turns.push_back(Turn{phase, index, role, std::move(content), std::move(timestamp)});
}

std::vector<Violation> validate_transcript(const Transcript& t) {
  std::vector<Violation> out;
  std::optional<int> prev_index;
  std::optional<Phase> prev_phase;
  // Last non-system role seen in the current phase once a user turn has occurred.
  std::optional<Role> last_role;
  bool seen_user = false;

  for (const Turn& turn : t.turns) {
    if (prev_index && turn.index <= *prev_index) {
      out.push_back({turn.index, "index-order",
                     "index " + std::to_string(turn.index) + " follows " +
                         std::to_string(*prev_index)});
    }
    prev_index = turn.index;

    if (prev_phase && turn.phase != *prev_phase) {
      if (static_cast<int>(turn.phase) < static_cast<int>(*prev_phase)) {
        out.push_back({turn.index, "phase-order",
                       std::string(to_string(turn.phase)) + " after " +
                           std::string(to_string(*prev_phase))});
      }
      last_role.reset();
      seen_user = false;
    }
    prev_phase = turn.phase;

    if (turn.role == Role::system) continue;
    if (!seen_user) {
      if (turn.role != Role::user) continue;
      seen_user = true;
      last_role = Role::user;
      continue;
    }
    if (last_role && *last_role == turn.role) {
      out.push_back({turn.index, "alternation",
                     "two consecutive " + std::string(to_string(turn.role)) + " turns"});
    }
    last_role = turn.role;
  }
  return out;
}

void write_jsonl(std::ostream& out, const Transcript& t, bool include_timestamps) {
  for (const Turn& turn : t.turns) {
    nlohmann::ordered_json j;
    j["run_id"] = t.run_id;
    j["condition"] = t.condition.str();
    j["phase"] = to_string(turn.phase);
    j["index"] = turn.index;
    j["role"] = to_string(turn.role);
    j["content"] = turn.content;
    if (include_timestamps) j["timestamp"] = turn.timestamp;
    out << j.dump() << '\n';
  }
}

std::string to_jsonl(const Transcript& t, bool include_timestamps) {
  std::ostringstream os;
  write_jsonl(os, t, include_timestamps);
  return os.str();
}

namespace {

ConditionId parse_condition(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw std::runtime_error("bad condition field '" + s + "'");
  return ConditionId(parse_experiment(s.substr(0, slash)), s.substr(slash + 1));
}

}  // namespace

Transcript read_jsonl(std::istream& in) {
  std::optional<Transcript> t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      const auto run_id = j.at("run_id").get<std::string>();
      if (!t) {
        t.emplace(Transcript{run_id, parse_condition(j.at("condition").get<std::string>()), {}});
      } else if (t->run_id != run_id) {
        throw std::runtime_error("mixed run ids");
      }
      t->turns.push_back(Turn{parse_phase(j.at("phase").get<std::string>()),
                              j.at("index").get<int>(),
                              parse_role(j.at("role").get<std::string>()),
                              j.at("content").get<std::string>(),
                              j.value("timestamp", std::string{})});
    } catch (const std::exception& e) {
      throw std::runtime_error("transcript line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!t) throw std::runtime_error("empty transcript");
  return std::move(*t);
}

}  // namespace implang
