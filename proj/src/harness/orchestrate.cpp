#include "implang/harness/orchestrate.hpp"

#include <fstream>
#include <sstream>

#include "implang/core/errors.hpp"
#include "implang/core/files.hpp"
#include "implang/harness/experiments.hpp"
#include "implang/learners/baselines.hpp"
#include "implang/learners/scripted.hpp"

namespace implang::harness {

namespace fs = std::filesystem;
using learners::LearnerConfig;

namespace {

/// Serializes --debug-wire output of concurrent runs line block by block.
class LockedLog : public std::streambuf {
 public:
  LockedLog(std::ostream& out, std::mutex& mu) : out_(out), mu_(mu) {}

 protected:
  int overflow(int ch) override {
    if (ch != EOF) buffer_ += static_cast<char>(ch);
    if (ch == '\n') flush_buffer();
    return ch;
  }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    buffer_.append(s, static_cast<std::size_t>(n));
    if (buffer_.find('\n') != std::string::npos) flush_buffer();
    return n;
  }

 private:
  void flush_buffer() {
    std::lock_guard lock(mu_);
    out_ << buffer_;
    out_.flush();
    buffer_.clear();
  }

  std::ostream& out_;
  std::mutex& mu_;
  std::string buffer_;
};

class LoggedBackend : public learners::Learner {
 public:
  LoggedBackend(const LearnerConfig& cfg, learners::RemoteChatBackend::Options opts,
                std::ostream* sink, std::mutex& mu)
      : buf_(sink ? std::make_unique<LockedLog>(*sink, mu) : nullptr),
        stream_(buf_.get()),
        inner_(cfg, with_log(std::move(opts))) {}

  std::string reply(std::span<const learners::ChatMessage> h, const learners::Prompt& p) override {
    return inner_.reply(h, p);
  }
  std::string describe() const override { return inner_.describe(); }

 private:
  learners::RemoteChatBackend::Options with_log(learners::RemoteChatBackend::Options o) {
    if (buf_) o.wire_log = &stream_;
    return o;
  }

  std::unique_ptr<LockedLog> buf_;
  std::ostream stream_;
  learners::RemoteChatBackend inner_;
};

Json seeds_to_json(const Seeds& s) {
  return Json{{"stimulus_seed", s.stimulus_seed}, {"order_seed", s.order_seed}, {"learner_seed", s.learner_seed}};
}

void write_manifest(const fs::path& dir, const RunManifest& m) {
  atomic_write(dir / kManifestFile, m.to_json());
}

void write_outputs(const fs::path& dir, const RunManifest& m, const RunResult& r) {
  atomic_write(dir / m.results, to_csv(r.results.rows));
  for (const auto& t : r.extra) atomic_write(dir / t.file_name, to_csv(t.rows));
  atomic_write(dir / m.metrics, r.metrics.dump(2) + "\n");
}

RunManifest start_manifest(const RunConfig& cfg) {
  RunManifest m;
  m.run_id = cfg.run_id();
  m.config_hash = cfg.config_hash();
  m.experiment = std::string(to_string(cfg.condition.experiment()));
  m.condition = cfg.condition.label();
  m.learner = learner_spec(cfg.learner);
  m.seeds = cfg.seeds;
  m.order_index = cfg.order_index;
  return m;
}

}  // namespace

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::pending: return "pending";
    case RunStatus::completed: return "completed";
    case RunStatus::failed: return "failed";
  }
  return "?";
}

RunStatus parse_status(std::string_view s) {
  if (s == "pending") return RunStatus::pending;
  if (s == "completed") return RunStatus::completed;
  if (s == "failed") return RunStatus::failed;
  throw std::invalid_argument("unknown run status: " + std::string(s));
}

std::string RunManifest::to_json() const {
  Json j{{"run_id", run_id},
         {"config_hash", config_hash},
         {"experiment", experiment},
         {"condition", condition},
         {"learner", learner},
         {"order_index", order_index},
         {"seeds", seeds_to_json(seeds)},
         {"transcript", transcript},
         {"results", results},
         {"metrics", metrics},
         {"status", to_string(status)},
         {"failure_reason", failure_reason}};
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  try {
    const auto j = Json::parse(text);
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.experiment = j.at("experiment").get<std::string>();
    m.condition = j.at("condition").get<std::string>();
    m.learner = j.at("learner").get<std::string>();
    m.order_index = j.at("order_index").get<int>();
    const auto& s = j.at("seeds");
    m.seeds = {s.at("stimulus_seed").get<std::uint64_t>(), s.at("order_seed").get<std::uint64_t>(),
               s.at("learner_seed").get<std::uint64_t>()};
    m.transcript = j.at("transcript").get<std::string>();
    m.results = j.at("results").get<std::string>();
    m.metrics = j.at("metrics").get<std::string>();
    m.status = parse_status(j.at("status").get<std::string>());
    m.failure_reason = j.at("failure_reason").get<std::string>();
    return m;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed manifest: ") + e.what());
  }
}

RunManifest read_manifest(const fs::path& run_dir) {
  return RunManifest::from_json(read_file(run_dir / kManifestFile));
}

bool manifest_complete(const RunManifest& m, const fs::path& run_dir) {
  if (m.status != RunStatus::completed) return false;
  for (const auto& f : {m.transcript, m.results, m.metrics}) {
    std::error_code ec;
    const auto size = fs::file_size(run_dir / f, ec);
    if (ec || size == 0) return false;
  }
  return true;
}

std::unique_ptr<learners::Learner> make_learner(const RunConfig& cfg, const RunContext& ctx) {
  const auto& lc = cfg.learner;
  lc.validate();
  switch (lc.kind) {
    case LearnerConfig::Kind::baseline:
      return std::make_unique<learners::BaselineLearner>(learners::make_baseline(lc.model_name),
                                                         cfg.seeds.learner_seed);
    case LearnerConfig::Kind::scripted: {
      std::vector<std::string> script = default_script();
      if (auto it = lc.baseline_params.find("script"); it != lc.baseline_params.end())
        script = learners::load_script(it->second);
      std::optional<int> fail_after;
      if (auto it = lc.baseline_params.find("fail_after"); it != lc.baseline_params.end()) {
        try {
          fail_after = std::stoi(it->second);
        } catch (const std::exception&) {
          throw ConfigError("fail_after must be an integer");
        }
      }
      return std::make_unique<learners::ScriptedLearner>(std::move(script), fail_after);
    }
    case LearnerConfig::Kind::remote_chat: {
      learners::RemoteChatBackend::Options opts;
      opts.limiter = ctx.limiter;
      opts.jitter_seed = cfg.seeds.learner_seed;
      if (ctx.http_post) opts.post = *ctx.http_post;
      if (ctx.sleeper) opts.sleep = *ctx.sleeper;
      return std::make_unique<LoggedBackend>(lc, std::move(opts), ctx.wire_log, *ctx.wire_mutex);
    }
  }
  throw ConfigError("unknown learner kind");
}

RunManifest orchestrate_run(const RunConfig& cfg, const RunContext& ctx) {
  auto learner = make_learner(cfg, ctx);
  return orchestrate_run(cfg, *learner, ctx);
}

RunManifest orchestrate_run(const RunConfig& cfg, learners::Learner& learner, const RunContext& ctx) {
  const fs::path dir = cfg.run_dir();
  fs::create_directories(dir);
  RunManifest m = start_manifest(cfg);
  write_manifest(dir, m);
  Transcript transcript{m.run_id, cfg.condition, {}};
  try {
    const RunResult result = run_experiment(cfg, learner, transcript, ctx.clock);
    atomic_write(dir / m.transcript, to_jsonl(transcript));
    write_outputs(dir, m, result);
    m.status = RunStatus::completed;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // LearnerError, RunInvalid, or a scoring invariant: keep what was said
    atomic_write(dir / m.transcript, to_jsonl(transcript));
    for (const auto& f : {m.results, m.metrics}) fs::remove(dir / f);
    m.status = RunStatus::failed;
    m.failure_reason = e.what();
  }
  write_manifest(dir, m);
  return m;
}

int rescore_run(const RunConfig& cfg) {
  const fs::path dir = cfg.run_dir();
  const RunManifest m = read_manifest(dir);
  if (m.status != RunStatus::completed) throw std::runtime_error(m.run_id + " did not complete");
  std::ifstream in(dir / m.transcript);
  if (!in) throw std::runtime_error("no transcript for " + m.run_id);
  const Transcript recorded = read_jsonl(in);
  std::vector<learners::ReplayLearner::Exchange> exchanges;
  for (std::size_t i = 0; i + 1 < recorded.turns.size(); ++i)
    if (recorded.turns[i].role == Role::user && recorded.turns[i + 1].role == Role::assistant)
      exchanges.push_back({recorded.turns[i].content, recorded.turns[i + 1].content});
  learners::ReplayLearner replay(std::move(exchanges), /*strict=*/false);
  Transcript scratch{m.run_id, cfg.condition, {}};
  // keep the original timestamps; only parsing and scoring are redone
  const RunResult result = run_experiment(cfg, replay, scratch, [] { return std::string(); });
  write_outputs(dir, m, result);
  return replay.mismatches();
}

RunConfig config_from_manifest(const RunManifest& m, const SuiteSettings& settings) {
  RunConfig rc;
  rc.condition = ConditionId(parse_experiment(m.experiment), m.condition);
  rc.learner = settings.learner;
  apply_learner_spec(rc.learner, m.learner);
  rc.options = settings.options;
  rc.seeds = m.seeds;
  rc.order_index = m.order_index;
  rc.out_dir = settings.out_dir;
  const auto pos = m.run_id.rfind("run");
  rc.run_index = pos == std::string::npos ? 1 : std::stoi(m.run_id.substr(pos + 3));
  return rc;
}

}  // namespace implang::harness
