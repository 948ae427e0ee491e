#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>

#include "implang/core/errors.hpp"
#include "implang/core/files.hpp"
#include "implang/fsg/prompts.hpp"
#include "implang/fsg/scoring.hpp"
#include "implang/harness/config.hpp"
#include "implang/harness/experiments.hpp"
#include "implang/harness/generate.hpp"
#include "implang/harness/orchestrate.hpp"
#include "implang/harness/report.hpp"
#include "implang/harness/suite.hpp"
#include "implang/morphology/prompts.hpp"
#include "implang/morphosyntax/prompts.hpp"
#include "test_util.hpp"

namespace implang::harness {
namespace {

namespace fs = std::filesystem;
using implang::testing::TempDir;

RunContext quiet_ctx() {
  RunContext ctx;
  ctx.clock = [] { return std::string("2025-01-01T00:00:00.000Z"); };
  return ctx;
}

SuiteSettings settings_for(const fs::path& out, const std::string& spec, int runs) {
  SuiteSettings s = default_settings();
  apply_learner_spec(s.learner, spec);
  s.out_dir = out;
  s.runs_per_cell = runs;
  return s;
}

RunConfig first_run(Experiment e, const std::string& cond, const fs::path& out,
                    const std::string& spec = "scripted") {
  return schedule(ConditionId(e, cond), settings_for(out, spec, 1)).front();
}

Transcript load_transcript(const RunConfig& cfg) {
  std::ifstream in(cfg.run_dir() / "transcript.jsonl");
  return read_jsonl(in);
}

std::vector<std::string> user_turns(const Transcript& t) {
  std::vector<std::string> out;
  for (const auto& turn : t.turns)
    if (turn.role == Role::user) out.push_back(turn.content);
  return out;
}

std::vector<std::string> assistant_turns(const Transcript& t) {
  std::vector<std::string> out;
  for (const auto& turn : t.turns)
    if (turn.role == Role::assistant) out.push_back(turn.content);
  return out;
}

// Rebuilds the user turns a run must have sent, from the stimuli and the
// recorded replies (syntax feedback depends on them).
std::vector<std::string> expected_prompts(const RunConfig& cfg, const Transcript& t) {
  std::vector<std::string> out;
  switch (cfg.condition.experiment()) {
    case Experiment::morphology: {
      const auto st = morphology_stimuli(cfg);
      out.push_back(morphology::starting_prompt());
      std::vector<std::string> paras;
      for (const auto& p : st.paragraphs) paras.push_back(p.text);
      out.push_back(morphology::learning_prompt(paras));
      for (const auto& i : st.items) out.push_back(morphology::testing_prompt(i.noun, i.number_word));
      for (const auto& p : morphology::post_testing_prompts()) out.push_back(p);
      break;
    }
    case Experiment::morphosyntax: {
      namespace ms = morphosyntax;
      const auto st = morphosyntax_stimuli(cfg);
      out.push_back(ms::starting_prompt());
      out.push_back(ms::learning_prompt(st.training));
      for (int r = 1; r <= 4; ++r) {
        const auto& trial = st.test[static_cast<std::size_t>(r - 1)];
        for (std::size_t i = 0; i < trial.size(); ++i) {
          const auto s = trial[i].sentence.text();
          out.push_back(i == 0 ? ms::testing_start_prompt(r, s) : ms::testing_item_prompt(s));
        }
        if (r < 4) out.push_back(ms::testing_end_prompt(r));
      }
      for (const auto& p : ms::post_testing_prompts()) out.push_back(p);
      for (const auto& p : st.probes) out.push_back(ms::correction_prompt(p.sentence.text()));
      break;
    }
    case Experiment::syntax: {
      const auto st = syntax_stimuli(cfg);
      const auto replies = assistant_turns(t);
      std::size_t k = 1;  // reply 0 answers the starting prompt
      out.push_back(fsg::starting_prompt(st.grammar.alphabet(), 20));
      for (std::size_t b = 0; b < st.blocks.size(); ++b) {
        std::optional<fsg::Feedback> prev;
        for (const auto& s : st.blocks[b]) {
          out.push_back(prev ? fsg::learning_middle_prompt(*prev, s.text())
                             : fsg::learning_start_prompt(s.text()));
          const auto said = fsg::parse_yes_no(replies.at(k++));
          prev = fsg::Feedback{said && *said == s.grammatical, s.text(), s.grammatical};
        }
        out.push_back(fsg::learning_end_prompt(*prev, static_cast<int>(b + 1), b + 1 < st.blocks.size()));
        ++k;
      }
      out.push_back(fsg::post_testing_prompt(fsg::questions(st.grammar)));
      break;
    }
  }
  return out;
}

// --- config ------------------------------------------------------------------

TEST(Config, LearnerSpecs) {
  learners::LearnerConfig c;
  apply_learner_spec(c, "baseline:bigram");
  EXPECT_EQ(learner_spec(c), "baseline:bigram");
  apply_learner_spec(c, "chat:gpt-4o");
  EXPECT_EQ(c.kind, learners::LearnerConfig::Kind::remote_chat);
  EXPECT_EQ(learner_spec(c), "chat:gpt-4o");
  apply_learner_spec(c, "scripted:/tmp/x.json");
  EXPECT_EQ(learner_spec(c), "scripted:/tmp/x.json");
  EXPECT_THROW(apply_learner_spec(c, "baseline"), ConfigError);
  EXPECT_THROW(apply_learner_spec(c, "oracle:x"), ConfigError);
}

TEST(Config, IniFile) {
  TempDir dir;
  const auto p = dir.path() / "c.ini";
  atomic_write(p,
               "[run]\nseed = 9\nruns = 4\nparallel = 2\n"
               "[learner]\nspec = baseline:exemplar\nmax_retries = 2\n"
               "[morphosyntax]\nprinted_type2 = true\n"
               "[syntax]\nn_blocks = 3\npairs_per_block = 5\n");
  const auto s = load_settings(p);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(s.runs_per_cell, 4);
  EXPECT_EQ(s.parallel, 2);
  EXPECT_EQ(learner_spec(s.learner), "baseline:exemplar");
  EXPECT_EQ(s.learner.max_retries, 2);
  EXPECT_TRUE(s.options.printed_type2);
  EXPECT_EQ(s.options.block_plan.n_blocks, 3);

  atomic_write(p, "[run]\nseeed = 9\n");
  EXPECT_THROW(load_settings(p), ConfigError);
  atomic_write(p, "[learner]\ntemperature = -2\n");
  EXPECT_THROW(load_settings(p), ConfigError);
  atomic_write(p, "[run]\nruns = many\n");
  EXPECT_THROW(load_settings(p), ConfigError);
  atomic_write(p, "[learner]\nspec = chat:m\n");
  EXPECT_THROW(load_settings(p), ConfigError);  // no endpoint
  EXPECT_THROW(load_settings(dir.path() / "missing.ini"), ConfigError);
}

TEST(Schedule, DefaultShape) {
  const auto s = default_settings();
  const auto m = schedule(ConditionId(Experiment::morphology, "5R4E"), s);
  ASSERT_EQ(m.size(), 15u);
  std::set<std::uint64_t> orders, stimuli, learners;
  for (const auto& r : m) {
    orders.insert(r.seeds.order_seed);
    stimuli.insert(r.seeds.stimulus_seed);
    learners.insert(r.seeds.learner_seed);
  }
  EXPECT_EQ(orders.size(), 3u);
  EXPECT_EQ(stimuli.size(), 1u);
  EXPECT_EQ(learners.size(), 15u);
  EXPECT_EQ(m[4].order_index, 0);
  EXPECT_EQ(m[5].order_index, 1);
  EXPECT_EQ(m[14].run_id(), "morphology-5R4E-run15");

  const auto ms = schedule(Experiment::morphosyntax, s);
  EXPECT_EQ(ms.size(), 20u);
  const auto sy = schedule(Experiment::syntax, s, {"grammarB"});
  ASSERT_EQ(sy.size(), 15u);
  std::set<std::uint64_t> sy_stimuli;
  for (const auto& r : sy) sy_stimuli.insert(r.seeds.stimulus_seed);
  EXPECT_EQ(sy_stimuli.size(), 3u);
  EXPECT_THROW(schedule(Experiment::syntax, s, {"grammarC"}), std::invalid_argument);
}

TEST(Schedule, SeedChangesEverything) {
  auto a = default_settings(), b = default_settings();
  b.seed = 2;
  const auto ra = schedule(ConditionId(Experiment::syntax, "grammarA"), a);
  const auto rb = schedule(ConditionId(Experiment::syntax, "grammarA"), b);
  EXPECT_NE(ra[0].seeds.stimulus_seed, rb[0].seeds.stimulus_seed);
  EXPECT_NE(ra[0].config_hash(), rb[0].config_hash());
  EXPECT_EQ(ra[0].config_hash(), schedule(ConditionId(Experiment::syntax, "grammarA"), a)[0].config_hash());
}

// --- single runs -------------------------------------------------------------

struct Case {
  Experiment e;
  const char* cond;
  std::size_t turns;
};

const std::vector<Case> kCases{{Experiment::morphology, "5R4E", 2 * 16},
                               {Experiment::morphosyntax, "low-S2", 2 * (2 + 96 + 3 + 2 + 4)},
                               {Experiment::syntax, "grammarB", 2 * (1 + 6 * 21 + 1)}};

TEST(Run, ScriptedCompletesEveryExperiment) {
  TempDir dir;
  for (const auto& c : kCases) {
    const auto cfg = first_run(c.e, c.cond, dir.path());
    const auto m = orchestrate_run(cfg, quiet_ctx());
    ASSERT_EQ(m.status, RunStatus::completed) << m.failure_reason;
    EXPECT_TRUE(manifest_complete(m, cfg.run_dir()));
    const auto t = load_transcript(cfg);
    EXPECT_EQ(t.turns.size(), c.turns) << to_string(c.e);
    EXPECT_TRUE(validate_transcript(t).empty());
    EXPECT_EQ(user_turns(t), expected_prompts(cfg, t)) << to_string(c.e);
    const auto metrics = nlohmann::json::parse(read_file(cfg.run_dir() / "metrics.json"));
    EXPECT_EQ(metrics["run_id"], cfg.run_id());
  }
}

TEST(Run, BaselineTranscriptsMatchRenderers) {
  TempDir dir;
  const std::vector<std::pair<Case, const char*>> cases{
      {kCases[0], "baseline:frequency"}, {kCases[1], "baseline:exemplar"}, {kCases[2], "baseline:bigram"}};
  for (const auto& [c, spec] : cases) {
    const auto cfg = first_run(c.e, c.cond, dir.path(), spec);
    ASSERT_EQ(orchestrate_run(cfg, quiet_ctx()).status, RunStatus::completed);
    const auto t = load_transcript(cfg);
    EXPECT_EQ(user_turns(t), expected_prompts(cfg, t)) << spec;
    EXPECT_TRUE(validate_transcript(t).empty());
  }
}

TEST(Run, LearnerFailureKeepsPartialTranscript) {
  TempDir dir;
  auto cfg = first_run(Experiment::morphology, "3R6E", dir.path());
  cfg.learner.baseline_params["fail_after"] = "5";
  const auto m = orchestrate_run(cfg, quiet_ctx());
  EXPECT_EQ(m.status, RunStatus::failed);
  EXPECT_NE(m.failure_reason.find("stopped after 5"), std::string::npos);
  const auto stored = read_manifest(cfg.run_dir());
  EXPECT_EQ(stored.status, RunStatus::failed);
  EXPECT_FALSE(manifest_complete(stored, cfg.run_dir()));
  EXPECT_EQ(load_transcript(cfg).turns.size(), 10u);
  EXPECT_TRUE(validate_transcript(load_transcript(cfg)).empty());
  EXPECT_FALSE(fs::exists(cfg.run_dir() / "results.csv"));
  EXPECT_FALSE(fs::exists(cfg.run_dir() / "metrics.json"));
}

TEST(Run, UnparseableMorphologyRunIsInvalid) {
  TempDir dir;
  atomic_write(dir.path() / "script.txt", "I would rather not say\n");
  const auto cfg = first_run(Experiment::morphology, "5R4E", dir.path(),
                             "scripted:" + (dir.path() / "script.txt").string());
  const auto m = orchestrate_run(cfg, quiet_ctx());
  EXPECT_EQ(m.status, RunStatus::failed);
  EXPECT_NE(m.failure_reason.find("no parseable"), std::string::npos);
  EXPECT_EQ(load_transcript(cfg).turns.size(), 32u);
}

TEST(Run, MissingGrammarFileIsConfigError) {
  TempDir dir;
  auto cfg = first_run(Experiment::syntax, "grammarA", dir.path());
  cfg.options.grammar_a_file = dir.path() / "nope.grammar";
  EXPECT_THROW(orchestrate_run(cfg, quiet_ctx()), ConfigError);
}

TEST(Run, GrammarFileOverride) {
  TempDir dir;
  atomic_write(dir.path() / "a.grammar", fsg::format_grammar(fsg::grammar_a()));
  auto cfg = first_run(Experiment::syntax, "grammarA", dir.path());
  auto builtin = cfg;
  cfg.options.grammar_a_file = dir.path() / "a.grammar";
  EXPECT_EQ(stimuli_json(cfg)["blocks"], stimuli_json(builtin)["blocks"]);
}

std::string strip(const fs::path& dir, const std::string& file) {
  return read_file(dir / file);
}

TEST(Run, DeterministicAcrossExecutions) {
  TempDir a, b;
  for (const auto& c : kCases) {
    for (const char* spec : {"scripted", "baseline:random"}) {
      const auto ca = first_run(c.e, c.cond, a.path(), spec);
      const auto cb = first_run(c.e, c.cond, b.path(), spec);
      RunContext real = quiet_ctx();
      real.clock = utc_now_iso8601;  // timestamps differ, nothing else may
      ASSERT_EQ(orchestrate_run(ca, real).status, RunStatus::completed);
      ASSERT_EQ(orchestrate_run(cb, real).status, RunStatus::completed);
      EXPECT_EQ(to_jsonl(load_transcript(ca), false), to_jsonl(load_transcript(cb), false));
      EXPECT_EQ(strip(ca.run_dir(), "results.csv"), strip(cb.run_dir(), "results.csv"));
      EXPECT_EQ(strip(ca.run_dir(), "metrics.json"), strip(cb.run_dir(), "metrics.json"));
      EXPECT_EQ(strip(ca.run_dir(), "manifest.json"), strip(cb.run_dir(), "manifest.json"));
    }
  }
}

TEST(Run, FreshLearnerPerRun) {
  // run02 alone and run02 after run01 in the same suite must match
  TempDir a, b;
  const auto s1 = schedule(ConditionId(Experiment::morphology, "5R4E"),
                           settings_for(a.path(), "baseline:frequency", 2));
  const auto s2 = schedule(ConditionId(Experiment::morphology, "5R4E"),
                           settings_for(b.path(), "baseline:frequency", 2));
  run_suite(s1, 1, quiet_ctx());
  orchestrate_run(s2[1], quiet_ctx());
  EXPECT_EQ(read_file(s1[1].run_dir() / "results.csv"), read_file(s2[1].run_dir() / "results.csv"));
  const auto l1 = make_learner(s1[0], quiet_ctx());
  const auto l2 = make_learner(s1[0], quiet_ctx());
  EXPECT_NE(l1.get(), l2.get());
}

TEST(Rescore, ReproducesOutputsFromTranscript) {
  TempDir dir;
  for (const auto& c : kCases) {
    const auto cfg = first_run(c.e, c.cond, dir.path(), "baseline:random");
    ASSERT_EQ(orchestrate_run(cfg, quiet_ctx()).status, RunStatus::completed);
    const auto results = read_file(cfg.run_dir() / "results.csv");
    const auto metrics = read_file(cfg.run_dir() / "metrics.json");
    const auto transcript = read_file(cfg.run_dir() / "transcript.jsonl");
    atomic_write(cfg.run_dir() / "results.csv", "garbage");
    EXPECT_EQ(rescore_run(cfg), 0);
    EXPECT_EQ(read_file(cfg.run_dir() / "results.csv"), results);
    EXPECT_EQ(read_file(cfg.run_dir() / "metrics.json"), metrics);
    EXPECT_EQ(read_file(cfg.run_dir() / "transcript.jsonl"), transcript);
  }
}

TEST(Rescore, RefusesFailedRuns) {
  TempDir dir;
  auto cfg = first_run(Experiment::morphology, "3R6E", dir.path());
  cfg.learner.baseline_params["fail_after"] = "2";
  orchestrate_run(cfg, quiet_ctx());
  EXPECT_THROW(rescore_run(cfg), std::runtime_error);
}

TEST(Manifest, RoundTripAndReconstruction) {
  TempDir dir;
  const auto cfg = first_run(Experiment::syntax, "grammarA", dir.path(), "baseline:bigram");
  const auto m = orchestrate_run(cfg, quiet_ctx());
  EXPECT_EQ(RunManifest::from_json(m.to_json()).to_json(), m.to_json());
  const auto back = config_from_manifest(read_manifest(cfg.run_dir()), settings_for(dir.path(), "baseline:random", 1));
  EXPECT_EQ(back.config_hash(), cfg.config_hash());
}

TEST(Generate, WritesStimuli) {
  TempDir dir;
  const auto cfg = first_run(Experiment::syntax, "grammarB", dir.path());
  const auto paths = write_stimuli(cfg);
  ASSERT_EQ(paths.size(), 2u);
  const auto j = nlohmann::json::parse(read_file(paths[0]));
  EXPECT_EQ(j["blocks"].size(), 6u);
  for (const auto& block : j["blocks"]) {
    for (const auto& s : block) {
      EXPECT_EQ(fsg::accepts(fsg::grammar_b(), s["sentence"].get<std::string>()),
                s["grammatical"].get<bool>());
    }
  }
}

// --- suite -------------------------------------------------------------------

TEST(Suite, ResumesAndSkipsCompletedRuns) {
  TempDir dir;
  const auto runs = schedule(Experiment::syntax, settings_for(dir.path(), "baseline:bigram", 3));
  const auto first = run_suite(runs, 2, quiet_ctx());
  EXPECT_EQ(first.completed, 6);
  EXPECT_EQ(first.skipped, 0);
  const auto again = run_suite(runs, 2, quiet_ctx());
  EXPECT_EQ(again.skipped, 6);
  EXPECT_EQ(again.completed, 6);

  // an interrupted run (metrics missing) is redone; the rest are kept
  fs::remove(runs[1].run_dir() / "metrics.json");
  const auto before = read_file(runs[0].run_dir() / "results.csv");
  const auto third = run_suite(runs, 1, quiet_ctx());
  EXPECT_EQ(third.skipped, 5);
  EXPECT_TRUE(fs::exists(runs[1].run_dir() / "metrics.json"));
  EXPECT_EQ(read_file(runs[0].run_dir() / "results.csv"), before);

  // a changed config hash invalidates the stored run
  auto changed = runs;
  changed[2].options.questionnaire_corpus = 2000;
  EXPECT_EQ(run_suite(changed, 1, quiet_ctx()).skipped, 5);
}

TEST(Suite, CountsFailuresAndStopsOnConfigError) {
  TempDir dir;
  auto runs = schedule(Experiment::morphology, settings_for(dir.path(), "scripted", 2));
  runs[1].learner.baseline_params["fail_after"] = "1";
  const auto r = run_suite(runs, 2, quiet_ctx());
  EXPECT_EQ(r.failed, 1);
  EXPECT_EQ(r.completed, 3);

  unsetenv("IMPLANG_NO_SUCH_KEY");
  auto remote = schedule(Experiment::morphology, settings_for(dir.path() / "r", "chat:m", 1));
  for (auto& rc : remote) {
    rc.learner.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    rc.learner.api_key_env = "IMPLANG_NO_SUCH_KEY";
  }
  EXPECT_THROW(run_suite(remote, 2, quiet_ctx()), ConfigError);
}

TEST(Suite, RemoteRunsThroughInjectedTransport) {
  TempDir dir;
  setenv("IMPLANG_FAKE_KEY", "k", 1);
  std::mutex mu;
  int calls = 0;
  RunContext ctx = quiet_ctx();
  ctx.limiter = std::make_shared<learners::RequestLimiter>(2);
  ctx.http_post = [&](const std::string&, const std::map<std::string, std::string>&,
                      const std::string& body, double) {
    std::lock_guard lock(mu);
    ++calls;
    if (calls % 7 == 0) return learners::HttpReply{429, "", ""};
    const auto j = nlohmann::json::parse(body);
    const std::string last = j["messages"].back()["content"];
    const std::string content = last.find("Where is my") != std::string::npos ? "ka" : "OK.";
    return learners::HttpReply{
        200, nlohmann::json{{"choices", {{{"message", {{"content", content}}}}}}}.dump(), ""};
  };
  ctx.sleeper = [](std::chrono::milliseconds) {};
  auto runs = schedule(Experiment::morphology, settings_for(dir.path(), "chat:test-model", 2));
  for (auto& rc : runs) {
    rc.learner.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    rc.learner.api_key_env = "IMPLANG_FAKE_KEY";
  }
  const auto r = run_suite(runs, 2, ctx);
  EXPECT_EQ(r.completed, 4);
  EXPECT_LE(ctx.limiter->peak(), 2);
  const auto metrics = nlohmann::json::parse(read_file(runs[0].run_dir() / "metrics.json"));
  EXPECT_DOUBLE_EQ(metrics["regularization_rate"].get<double>(), 1.0);
  unsetenv("IMPLANG_FAKE_KEY");
}

// --- report ------------------------------------------------------------------

void check_golden(const std::string& rel, const std::string& actual) {
  const auto path = fs::path(IMPLANG_GOLDEN_DIR) / rel;
  if (std::getenv("IMPLANG_UPDATE_GOLDEN")) atomic_write(path, actual);
  EXPECT_EQ(actual, read_file(path)) << rel;
}

TEST(Report, GoldenOnScriptedFixture) {
  TempDir dir;
  const std::map<Experiment, std::string> spec{{Experiment::morphology, "baseline:frequency"},
                                               {Experiment::morphosyntax, "baseline:exemplar"},
                                               {Experiment::syntax, "baseline:bigram"}};
  for (const auto& [e, learner] : spec) {
    run_suite(schedule(e, settings_for(dir.path(), learner, 3)), 1, quiet_ctx());
    const auto agg = load_aggregates(e, dir.path());
    const auto files = render_report(agg, analyze(agg));
    const auto again = render_report(agg, analyze(agg));
    EXPECT_EQ(files.markdown, again.markdown);
    const std::string base = "report/" + std::string(to_string(e)) + "/";
    check_golden(base + "report.md", files.markdown);
    check_golden(base + "stats.csv", files.stats_csv);
    check_golden(base + "runs.csv", files.runs_csv);
    check_golden(base + "comparison.csv", files.comparison_csv);
    for (const auto& [name, svg] : files.svgs) check_golden(base + name, svg);
  }
}

TEST(Report, ContentsAndErrors) {
  TempDir dir;
  run_suite(schedule(Experiment::morphology, settings_for(dir.path(), "baseline:majority", 2)), 1,
            quiet_ctx());
  const auto agg = load_aggregates(Experiment::morphology, dir.path());
  ASSERT_EQ(agg.runs.size(), 4u);
  EXPECT_EQ(agg.runs[0].condition, "5R4E");  // canonical condition order
  EXPECT_EQ(agg.learner, "baseline:majority");
  const auto files = emit_report(agg, dir.path() / "morphology");
  EXPECT_NE(files.markdown.find("65.0 / 51.7"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "morphology" / "report.md"));
  EXPECT_TRUE(fs::exists(dir.path() / "morphology" / "morphology_rates.svg"));

  TempDir empty;
  EXPECT_THROW(render_report(load_aggregates(Experiment::syntax, empty.path()), {}),
               std::runtime_error);
}

}  // namespace
}  // namespace implang::harness
