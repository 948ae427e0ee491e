#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "implang/core/condition.hpp"

namespace implang {

enum class Phase { starting, learning, testing, post_testing };
enum class Role { system, user, assistant };

std::string_view to_string(Phase p);
std::string_view to_string(Role r);
Phase parse_phase(std::string_view s);
Role parse_role(std::string_view s);

struct Turn {
  Phase phase;
  int index;
  Role role;
  std::string content;
  std::string timestamp;  // ISO-8601 UTC; not part of determinism checks
};

/// Returns the current UTC time as ISO-8601 with a trailing Z.
std::string utc_now_iso8601();

using Clock = std::function<std::string()>;

struct Transcript {
  std::string run_id;
  ConditionId condition;
  std::vector<Turn> turns;

  /// Appends with the next index.
  void append(Phase phase, Role role, std::string content, std::string timestamp);
};

struct Violation {
  int turn_index;
  std::string rule;  // "index-order", "phase-order" or "alternation"
  std::string detail;
};

std::vector<Violation> validate_transcript(const Transcript& t);

/// One JSON object per line. Timestamps can be omitted for byte comparisons.
std::string to_jsonl(const Transcript& t, bool include_timestamps = true);
void write_jsonl(std::ostream& out, const Transcript& t, bool include_timestamps = true);
/// Throws std::runtime_error on malformed lines or mixed run ids.
Transcript read_jsonl(std::istream& in);

}  // namespace implang
