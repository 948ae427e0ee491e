#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>

#include "implang/core/transcript.hpp"
#include "implang/harness/config.hpp"
#include "implang/learners/chat_client.hpp"
#include "implang/learners/learner.hpp"

namespace implang::harness {

enum class RunStatus { pending, completed, failed };
std::string_view to_string(RunStatus s);
RunStatus parse_status(std::string_view s);

/// Paths are relative to the run directory.
struct RunManifest {
  std::string run_id;
  std::string config_hash;
  std::string experiment;
  std::string condition;
  std::string learner;
  Seeds seeds;
  int order_index = 0;
  std::string transcript = "transcript.jsonl";
  std::string results = "results.csv";
  std::string metrics = "metrics.json";
  RunStatus status = RunStatus::pending;
  std::string failure_reason;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

inline constexpr const char* kManifestFile = "manifest.json";

RunManifest read_manifest(const std::filesystem::path& run_dir);

/// Completed and every referenced file present and non-empty.
bool manifest_complete(const RunManifest& m, const std::filesystem::path& run_dir);

/// Shared by all runs of one invocation.
struct RunContext {
  Clock clock = utc_now_iso8601;
  std::shared_ptr<learners::RequestLimiter> limiter;
  std::ostream* wire_log = nullptr;  // --debug-wire
  std::shared_ptr<std::mutex> wire_mutex = std::make_shared<std::mutex>();
  /// Test hooks for the remote backend.
  std::optional<learners::HttpPost> http_post;
  std::optional<learners::Sleeper> sleeper;
};

/// A fresh learner for one run. Throws ConfigError.
std::unique_ptr<learners::Learner> make_learner(const RunConfig& cfg, const RunContext& ctx);

/// Executes all phases and writes transcript, results, metrics and the
/// manifest atomically under cfg.run_dir(). A learner failure yields a
/// failed manifest with the partial transcript and no results or metrics.
/// ConfigError propagates.
RunManifest orchestrate_run(const RunConfig& cfg, const RunContext& ctx = {});

/// Same, with a caller-supplied learner.
RunManifest orchestrate_run(const RunConfig& cfg, learners::Learner& learner, const RunContext& ctx);

/// Re-parses and re-scores a completed run from its transcript, without
/// contacting any learner. Rewrites results and metrics. Returns the number
/// of prompts that no longer match the recording.
int rescore_run(const RunConfig& cfg);

/// Reconstructs the RunConfig of a stored run from its manifest plus the
/// experiment options in `settings`.
RunConfig config_from_manifest(const RunManifest& m, const SuiteSettings& settings);

}  // namespace implang::harness
