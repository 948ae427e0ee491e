#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <deque>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "implang/core/errors.hpp"
#include "implang/learners/baselines.hpp"
#include "implang/learners/chat_client.hpp"
#include "implang/learners/learner.hpp"
#include "implang/learners/scripted.hpp"
#include "test_util.hpp"

namespace implang::learners {
namespace {

MorphExposure morph(std::vector<std::pair<std::string, std::string>> plurals, int singulars = 0) {
  MorphExposure e;
  for (auto& [n, m] : plurals) e.tokens.push_back({n, m});
  for (int i = 0; i < singulars; ++i) e.tokens.push_back({"mawg", std::nullopt});
  return e;
}

TEST(Frequency, MatchesTokenShares) {
  FrequencyMatching f;
  f.observe(morph({{"a", "ka"}, {"a", "ka"}, {"a", "ka"}, {"b", "po"}}, 5));
  EXPECT_EQ(f.counts().at("ka"), 3);
  EXPECT_EQ(f.counts().size(), 2u);
  Rng rng(1);
  int ka = 0;
  const int n = 40'000;
  for (int i = 0; i < n; ++i) {
    ka += std::get<MarkerAnswer>(f.answer(PluralQuery{"sep", "two"}, rng)).marker == "ka";
  }
  EXPECT_NEAR(ka / double(n), 0.75, 0.01);
  EXPECT_TRUE(std::holds_alternative<Refusal>(f.answer(JudgmentQuery{"x"}, rng)));
  FrequencyMatching empty;
  EXPECT_TRUE(std::holds_alternative<Refusal>(empty.answer(PluralQuery{"sep", "two"}, rng)));
}

TEST(Majority, TypeCountsWithTieBreak) {
  MajorityType m;
  // tokens of one noun count once
  m.observe(morph({{"a", "po"}, {"a", "po"}, {"a", "po"}, {"b", "ka"}, {"c", "ka"}}));
  EXPECT_EQ(m.majority_marker(), "ka");
  MajorityType tie;
  tie.observe(morph({{"a", "po"}, {"b", "ka"}}));
  EXPECT_EQ(tie.majority_marker(), "ka");
  Rng rng(1);
  EXPECT_EQ(std::get<MarkerAnswer>(m.answer(PluralQuery{"sep", "two"}, rng)).marker, "ka");
}

TEST(Exemplar, ExactMatchOnly) {
  ExemplarJudge j;
  j.observe(SentenceExposure{"alt deech erd hift", true});
  j.observe(SentenceExposure{"erd hift alt tasp", std::nullopt});
  j.observe(SentenceExposure{"alt tasp erd hift", false});
  Rng rng(1);
  EXPECT_TRUE(std::get<JudgmentAnswer>(j.answer(JudgmentQuery{"alt deech erd hift"}, rng)).correct);
  EXPECT_FALSE(std::get<JudgmentAnswer>(j.answer(JudgmentQuery{"erd hift alt tasp"}, rng)).correct);
  EXPECT_FALSE(std::get<JudgmentAnswer>(j.answer(JudgmentQuery{"alt tasp erd hift"}, rng)).correct);
  const auto fix = std::get<TextAnswer>(j.answer(OpenQuery{"deech alt erd hift"}, rng));
  EXPECT_EQ(fix.text, "It should be 'alt deech erd hift'.");
}

TEST(Bigram, BoundariesAndLabels) {
  Bigram b;
  b.observe(SentenceExposure{"X X V J", true});
  b.observe(SentenceExposure{"X T T J", false});
  EXPECT_TRUE(b.accepts("X X V J"));
  EXPECT_TRUE(b.accepts("X X X V J"));
  EXPECT_FALSE(b.accepts("X V"));
  EXPECT_FALSE(b.accepts("X T T J"));
  Rng rng(1);
  EXPECT_TRUE(std::get<YesNoAnswer>(b.answer(YesNoQuery{"X V J"}, rng)).yes);
}

TEST(Random, JudgmentsAreFair) {
  RandomResponder r;
  Rng rng(3);
  int yes = 0;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) yes += std::get<YesNoAnswer>(r.answer(YesNoQuery{"s"}, rng)).yes;
  EXPECT_NEAR(yes / double(n), 0.5, 0.02);
  const auto letters =
      std::get<LettersAnswer>(r.answer(QuestionnaireQuery{7, {'X', 'V'}}, rng)).answers;
  ASSERT_EQ(letters.size(), 7u);
  for (const auto& s : letters) EXPECT_EQ(s.size(), 1u);
}

TEST(Factory, NamesAndErrors) {
  for (const auto& n : baseline_names()) EXPECT_EQ(make_baseline(n)->name(), n);
  EXPECT_EQ(make_baseline("frequency-matching")->name(), "frequency");
  EXPECT_THROW(make_baseline("oracle"), ConfigError);
}

TEST(Render, EveryAnswerType) {
  EXPECT_EQ(render_answer(PluralQuery{"sep", "two"}, MarkerAnswer{"ka"}), "sepka");
  EXPECT_EQ(render_answer(JudgmentQuery{"s"}, JudgmentAnswer{false}), "incorrect");
  EXPECT_EQ(render_answer(YesNoQuery{"s"}, YesNoAnswer{true}), "yes");
  EXPECT_EQ(render_answer(QuestionnaireQuery{2, {}}, LettersAnswer{{{'X', 'V'}, {}}}),
            "1. V, X\n2. none");
  EXPECT_EQ(render_answer(OpenQuery{}, TextAnswer{"hm"}), "hm");
  EXPECT_EQ(render_answer(YesNoQuery{"s"}, Refusal{}), kRefusalText);
}

TEST(Adapter, AcknowledgesWithoutQueryAndObservesEvents) {
  BaselineLearner l(make_baseline("frequency"), 9);
  TextSession s(l);
  Prompt learn{"paragraphs", {morph({{"a", "ka"}})}, std::nullopt};
  EXPECT_EQ(s.send(learn), kAckText);
  Prompt test{"test", {}, PluralQuery{"sep", "two"}};
  EXPECT_EQ(s.send(test), "sepka");
  EXPECT_EQ(s.history().size(), 4u);
  EXPECT_EQ(s.history()[2].content, "test");
  EXPECT_EQ(l.describe(), "baseline:frequency");
}

TEST(Adapter, SameSeedSameReplies) {
  auto run = [](std::uint64_t seed) {
    BaselineLearner l(make_baseline("random"), seed);
    TextSession s(l);
    s.send({"", {morph({{"a", "ka"}, {"b", "po"}, {"c", "lee"}})}, std::nullopt});
    std::string all;
    for (int i = 0; i < 30; ++i) all += s.send({"", {}, PluralQuery{"sep", "two"}});
    return all;
  };
  EXPECT_EQ(run(4), run(4));
  EXPECT_NE(run(4), run(5));
}

class Throwing : public Learner {
 public:
  std::string reply(std::span<const ChatMessage>, const Prompt&) override {
    throw LearnerError("boom");
  }
  std::string describe() const override { return "throwing"; }
};

TEST(Session, FailureLeavesHistoryUntouched) {
  Throwing t;
  TextSession s(t);
  EXPECT_THROW(s.send({"hi", {}, std::nullopt}), LearnerError);
  EXPECT_TRUE(s.history().empty());
}

TEST(Scripted, CyclesAndFails) {
  ScriptedLearner l({"a", "b"}, 3);
  TextSession s(l);
  EXPECT_EQ(s.send({}), "a");
  EXPECT_EQ(s.send({}), "b");
  EXPECT_EQ(s.send({}), "a");
  EXPECT_THROW(s.send({}), LearnerError);
  EXPECT_EQ(s.history().size(), 6u);
  EXPECT_THROW(ScriptedLearner({}), std::invalid_argument);
}

TEST(Scripted, LoadScriptFormats) {
  testing::TempDir dir;
  atomic_write(dir.path() / "a.json", R"(["one", "two\nlines"])");
  atomic_write(dir.path() / "b.txt", "one\n\n two \n");
  atomic_write(dir.path() / "c.json", "[1, 2");
  EXPECT_EQ(load_script((dir.path() / "a.json").string()),
            (std::vector<std::string>{"one", "two\nlines"}));
  EXPECT_EQ(load_script((dir.path() / "b.txt").string()), (std::vector<std::string>{"one", "two"}));
  EXPECT_THROW(load_script((dir.path() / "c.json").string()), ConfigError);
}

TEST(Replay, StrictAndLenient) {
  ReplayLearner strict({{"p1", "r1"}, {"p2", "r2"}});
  EXPECT_EQ(strict.reply({}, {"p1", {}, std::nullopt}), "r1");
  EXPECT_THROW(strict.reply({}, {"other", {}, std::nullopt}), ReplayMismatch);
  ReplayLearner lenient({{"p1", "r1"}}, false);
  EXPECT_EQ(lenient.reply({}, {"changed", {}, std::nullopt}), "r1");
  EXPECT_EQ(lenient.mismatches(), 1);
  EXPECT_TRUE(lenient.exhausted());
  EXPECT_THROW(lenient.reply({}, {"p2", {}, std::nullopt}), ReplayMismatch);
}

// --- remote chat -----------------------------------------------------------

struct EnvKey {
  explicit EnvKey(const char* value) { setenv("IMPLANG_TEST_KEY", value, 1); }
  ~EnvKey() { unsetenv("IMPLANG_TEST_KEY"); }
};

LearnerConfig remote_config() {
  LearnerConfig c;
  c.kind = LearnerConfig::Kind::remote_chat;
  c.model_name = "test-model";
  c.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  c.api_key_env = "IMPLANG_TEST_KEY";
  c.max_retries = 3;
  return c;
}

std::string completion(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}
      .dump();
}

struct FakeServer {
  std::deque<HttpReply> replies;
  std::vector<std::string> bodies;
  std::vector<std::map<std::string, std::string>> headers;
  std::vector<std::chrono::milliseconds> sleeps;

  RemoteChatBackend::Options options() {
    RemoteChatBackend::Options o;
    o.post = [this](const std::string&, const std::map<std::string, std::string>& h,
                    const std::string& body, double) {
      bodies.push_back(body);
      headers.push_back(h);
      if (replies.empty()) return HttpReply{200, completion("ok"), ""};
      auto r = replies.front();
      replies.pop_front();
      return r;
    };
    o.sleep = [this](std::chrono::milliseconds d) { sleeps.push_back(d); };
    return o;
  }
};

TEST(Remote, MissingCredentialIsConfigErrorBeforeAnyCall) {
  unsetenv("IMPLANG_TEST_KEY");
  FakeServer fake;
  EXPECT_THROW(RemoteChatBackend(remote_config(), fake.options()), ConfigError);
  EXPECT_TRUE(fake.bodies.empty());
}

TEST(Remote, EchoesOkAndSendsHistory) {
  EnvKey key("secret-123");
  FakeServer fake;
  RemoteChatBackend b(remote_config(), fake.options());
  TextSession s(b);
  EXPECT_EQ(s.send({"first", {}, std::nullopt}), "ok");
  EXPECT_EQ(s.send({"second", {}, std::nullopt}), "ok");
  ASSERT_EQ(fake.bodies.size(), 2u);
  const auto j = nlohmann::json::parse(fake.bodies[1]);
  EXPECT_EQ(j["model"], "test-model");
  ASSERT_EQ(j["messages"].size(), 3u);
  EXPECT_EQ(j["messages"][0]["content"], "first");
  EXPECT_EQ(j["messages"][1]["role"], "assistant");
  EXPECT_EQ(j["messages"][2]["content"], "second");
  EXPECT_EQ(j["temperature"], 0.0);
  EXPECT_EQ(j["top_p"], 1.0);
  EXPECT_EQ(fake.headers[0].at("Authorization"), "Bearer secret-123");
  EXPECT_EQ(b.retries_used(), 0);
}

TEST(Remote, ReasoningEffortReplacesSampling) {
  EnvKey key("k");
  FakeServer fake;
  auto cfg = remote_config();
  cfg.reasoning_effort = "low";
  RemoteChatBackend b(cfg, fake.options());
  const auto j = nlohmann::json::parse(b.request_body({}, "hi"));
  EXPECT_EQ(j["reasoning_effort"], "low");
  EXPECT_FALSE(j.contains("temperature"));
  EXPECT_FALSE(j.contains("top_p"));
}

TEST(Remote, RetriesRateLimitWithBackoff) {
  EnvKey key("k");
  FakeServer fake;
  fake.replies = {{429, "slow down", ""}, {429, "slow down", ""}, {200, completion("fine"), ""}};
  auto cfg = remote_config();
  cfg.backoff.jitter = 0.0;
  RemoteChatBackend b(cfg, fake.options());
  TextSession s(b);
  EXPECT_EQ(s.send({"q", {}, std::nullopt}), "fine");
  EXPECT_EQ(b.retries_used(), 2);
  ASSERT_EQ(fake.sleeps.size(), 2u);
  EXPECT_EQ(fake.sleeps[0], std::chrono::milliseconds(1000));
  EXPECT_EQ(fake.sleeps[1], std::chrono::milliseconds(2000));
  EXPECT_EQ(s.history().size(), 2u);
}

TEST(Remote, TransportAndServerErrorsExhaustRetries) {
  EnvKey key("k");
  FakeServer fake;
  for (int i = 0; i < 10; ++i) fake.replies.push_back({i % 2 ? 503 : 0, "", "connection refused"});
  RemoteChatBackend b(remote_config(), fake.options());
  TextSession s(b);
  EXPECT_THROW(s.send({"q", {}, std::nullopt}), RetriesExhausted);
  EXPECT_EQ(fake.bodies.size(), 4u);  // first try + 3 retries
  EXPECT_TRUE(s.history().empty());
}

TEST(Remote, ClientErrorIsNotRetried) {
  EnvKey key("k");
  FakeServer fake;
  fake.replies = {{400, "bad request", ""}};
  RemoteChatBackend b(remote_config(), fake.options());
  try {
    b.reply({}, {"q", {}, std::nullopt});
    FAIL();
  } catch (const RetriesExhausted&) {
    FAIL();
  } catch (const LearnerError& e) {
    EXPECT_NE(std::string(e.what()).find("400"), std::string::npos);
  }
  EXPECT_EQ(fake.bodies.size(), 1u);
}

TEST(Remote, MalformedCompletionIsProtocolError) {
  EnvKey key("k");
  FakeServer fake;
  fake.replies = {{200, R"({"choices": []})", ""}};
  RemoteChatBackend b(remote_config(), fake.options());
  TextSession s(b);
  EXPECT_THROW(s.send({"q", {}, std::nullopt}), ProtocolError);
  EXPECT_TRUE(s.history().empty());
  EXPECT_THROW(parse_completion("not json"), ProtocolError);
  EXPECT_THROW(parse_completion(R"({"choices":[{"message":{"content":3}}]})"), ProtocolError);
  EXPECT_EQ(parse_completion(completion("x")), "x");
}

TEST(Remote, WireLogRedactsKey) {
  EnvKey key("very-secret");
  FakeServer fake;
  std::ostringstream log;
  auto opts = fake.options();
  opts.wire_log = &log;
  RemoteChatBackend b(remote_config(), opts);
  b.reply({}, {"q", {}, std::nullopt});
  EXPECT_EQ(log.str().find("very-secret"), std::string::npos);
  EXPECT_NE(log.str().find("[redacted]"), std::string::npos);
  EXPECT_NE(log.str().find("\"q\""), std::string::npos);
}

TEST(Remote, ConfigValidation) {
  auto c = remote_config();
  EXPECT_NO_THROW(c.validate());
  c.temperature = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = remote_config();
  c.top_p = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = remote_config();
  c.reasoning_effort = "extreme";
  EXPECT_THROW(c.validate(), ConfigError);
  c = remote_config();
  c.endpoint.clear();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Backoff, GrowsAndCaps) {
  BackoffPolicy p;
  p.jitter = 0;
  Rng rng(1);
  EXPECT_EQ(p.delay(0, rng).count(), 1000);
  EXPECT_EQ(p.delay(3, rng).count(), 8000);
  EXPECT_EQ(p.delay(20, rng).count(), 60000);
  p.jitter = 0.25;
  for (int i = 0; i < 1000; ++i) {
    const auto d = p.delay(1, rng).count();
    ASSERT_GE(d, 1500);
    ASSERT_LE(d, 2500);
  }
}

TEST(Limiter, BoundsConcurrency) {
  auto lim = std::make_shared<RequestLimiter>(3);
  std::atomic<int> active{0}, worst{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < 12; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 20; ++i) {
        auto slot = lim->acquire();
        const int now = ++active;
        int w = worst.load();
        while (now > w && !worst.compare_exchange_weak(w, now)) {
        }
        std::this_thread::sleep_for(std::chrono::microseconds(200));
        --active;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(worst.load(), 3);
  EXPECT_LE(lim->peak(), 3);
  EXPECT_EQ(lim->in_flight(), 0);
  EXPECT_THROW(RequestLimiter(0), std::invalid_argument);
}

TEST(Remote, RealHttpRoundTripAgainstLocalServer) {
  httplib::Server server;
  std::string seen_auth;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    res.set_content(completion("ok"), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  EnvKey key("local-key");
  auto cfg = remote_config();
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
  cfg.timeout_s = 10;
  RemoteChatBackend b(cfg);
  TextSession s(b);
  EXPECT_EQ(s.send({"hello", {}, std::nullopt}), "ok");
  EXPECT_EQ(seen_auth, "Bearer local-key");
  server.stop();
  th.join();
}

TEST(Remote, RealHttpConnectionRefusedIsTransportFailure) {
  const auto r = httplib_post("http://127.0.0.1:1/x", {}, "{}", 2.0);
  EXPECT_EQ(r.status, 0);
  EXPECT_FALSE(r.error.empty());
  EXPECT_THROW(httplib_post("ftp://nope", {}, "{}", 1.0), ConfigError);
}

}  // namespace
}  // namespace implang::learners
