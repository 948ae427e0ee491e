#include "implang/harness/experiments.hpp"

#include <fmt/format.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "implang/core/errors.hpp"
#include "implang/core/rng.hpp"
#include "implang/core/trial.hpp"
#include "implang/fsg/prompts.hpp"
#include "implang/fsg/questionnaire.hpp"
#include "implang/fsg/scoring.hpp"
#include "implang/morphology/prompts.hpp"
#include "implang/morphology/scoring.hpp"
#include "implang/morphosyntax/prompts.hpp"
#include "implang/morphosyntax/scoring.hpp"

namespace implang::harness {

using learners::Prompt;

namespace {

std::string num(double v) { return fmt::format("{:.6f}", v); }

Json seeds_json(const RunConfig& cfg) {
  return Json{{"stimulus_seed", cfg.seeds.stimulus_seed},
              {"order_seed", cfg.seeds.order_seed},
              {"learner_seed", cfg.seeds.learner_seed}};
}

Json base_metrics(const RunConfig& cfg) {
  return Json{{"run_id", cfg.run_id()},
              {"experiment", to_string(cfg.condition.experiment())},
              {"condition", cfg.condition.label()},
              {"order_index", cfg.order_index},
              {"seeds", seeds_json(cfg)}};
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  return in;
}

// --- morphology --------------------------------------------------------------

RunResult run_morphology(const RunConfig& cfg, Conversation& chat) {
  const auto st = morphology_stimuli(cfg);
  chat.ask(Phase::starting, {morphology::starting_prompt(), {}, {}});

  Prompt learn;
  std::vector<std::string> texts;
  for (const auto& p : st.paragraphs) {
    texts.push_back(p.text);
    learners::MorphExposure ex;
    for (const auto& t : p.tokens) ex.tokens.push_back({t.noun, t.marker});
    learn.events.emplace_back(std::move(ex));
  }
  learn.text = morphology::learning_prompt(texts);
  chat.ask(Phase::learning, learn);

  std::vector<std::string> raws;
  for (const auto& item : st.items)
    raws.push_back(chat.ask(Phase::testing, {morphology::testing_prompt(item.noun, item.number_word),
                                             {},
                                             learners::PluralQuery{item.noun, item.number_word}}));
  std::vector<std::string> probes;
  for (const auto& text : morphology::post_testing_prompts())
    probes.push_back(chat.ask(Phase::post_testing, {text, {}, learners::OpenQuery{}}));

  const std::string run_id = cfg.run_id();
  RunResult out;
  out.results.file_name = "results.csv";
  out.results.rows.push_back(
      {"run_id", "condition", "order_seed", "trial_index", "noun", "number", "raw", "parsed", "is_ka"});
  std::vector<TrialRecord> records;
  for (std::size_t i = 0; i < st.items.size(); ++i) {
    const auto& item = st.items[i];
    auto parsed = morphology::parse_plural_response(raws[i], item.noun);
    records.emplace_back(run_id, static_cast<int>(i + 1), item.noun + " / " + item.number_word,
                         std::string(morphology::kRegularMarker), raws[i], parsed);
    out.results.rows.push_back({run_id, cfg.condition.label(), std::to_string(cfg.seeds.order_seed),
                                std::to_string(i + 1), item.noun, item.number_word, raws[i],
                                parsed.value_or(""),
                                parsed ? (*parsed == morphology::kRegularMarker ? "1" : "0") : ""});
  }
  morphology::RegularizationScore score;
  try {
    score = morphology::score_regularization(records);
  } catch (const std::domain_error& e) {
    throw RunInvalid(std::string("morphology run has no parseable answers: ") + e.what());
  }

  std::map<std::string, morphology::ExplicitKnowledge> overrides;
  if (cfg.options.annotation_overrides) {
    auto in = open_input(*cfg.options.annotation_overrides);
    overrides = morphology::read_annotation_overrides(in);
  }
  const auto knowledge = morphology::annotate_explicit_knowledge(run_id, probes, &overrides);

  out.metrics = base_metrics(cfg);
  out.metrics["regularization_rate"] = score.rate;
  out.metrics["regular"] = score.regular;
  out.metrics["parseable"] = score.parseable;
  out.metrics["unparseable"] = score.unparseable;
  out.metrics["input_ka_fraction"] = morphology::input_regular_token_fraction(st.lexicon);
  out.metrics["recognized_pattern"] = knowledge.recognized_pattern;
  out.metrics["identified_ka"] = knowledge.identified_ka;
  out.metrics["annotation"] = overrides.count(run_id) ? "override" : "heuristic";
  return out;
}

// --- morphosyntax ------------------------------------------------------------

RunResult run_morphosyntax(const RunConfig& cfg, Conversation& chat) {
  using namespace morphosyntax;
  const auto st = morphosyntax_stimuli(cfg);
  chat.ask(Phase::starting, {morphosyntax::starting_prompt(), {}, {}});

  Prompt learn{learning_prompt(st.training), {}, {}};
  for (const auto& s : st.training) learn.events.emplace_back(learners::SentenceExposure{s.text(), true});
  chat.ask(Phase::learning, learn);

  const std::set<MsSentence> seen(st.training.begin(), st.training.end());
  const std::string run_id = cfg.run_id();
  RunResult out;
  out.results.file_name = "results.csv";
  out.results.rows.push_back({"run_id", "condition", "subcondition", "trial", "item_index", "sentence",
                              "label", "error_type", "raw", "parsed", "correct"});
  std::vector<MsTrialRecord> records;
  int item_index = 0;
  for (int round = 1; round <= kTestTrials; ++round) {
    const auto& trial = st.test[static_cast<std::size_t>(round - 1)];
    for (std::size_t i = 0; i < trial.size(); ++i) {
      const auto& item = trial[i];
      const std::string s = item.sentence.text();
      const std::string text = i == 0 ? testing_start_prompt(round, s) : testing_item_prompt(s);
      const std::string raw = chat.ask(Phase::testing, {text, {}, learners::JudgmentQuery{s}});
      const auto judged = parse_judgment(raw);
      std::optional<std::string> parsed;
      if (judged) parsed = std::string(to_string(*judged));
      const std::string truth = item.grammatical() ? "correct" : "incorrect";
      TrialRecord rec(run_id, ++item_index, s, truth, raw, parsed);
      out.results.rows.push_back(
          {run_id, st.vocabulary.frequency, st.vocabulary.subcondition, std::to_string(round),
           std::to_string(item_index), s, truth, std::to_string(static_cast<int>(item.error)), raw,
           parsed.value_or(""), rec.correct() ? (*rec.correct() ? "1" : "0") : ""});
      records.push_back({std::move(rec), round, item.error, !seen.count(item.sentence)});
    }
    if (round < kTestTrials) chat.ask(Phase::testing, {testing_end_prompt(round), {}, {}});
  }

  for (const auto& text : morphosyntax::post_testing_prompts())
    chat.ask(Phase::post_testing, {text, {}, learners::OpenQuery{}});

  std::map<std::pair<std::string, int>, ProbeGrade> overrides;
  if (cfg.options.probe_overrides) {
    auto in = open_input(*cfg.options.probe_overrides);
    overrides = read_probe_overrides(in);
  }
  Table probes{"probes.csv", {{"run_id", "error_type", "sentence", "raw", "explains", "fixes", "graded_by"}}};
  Json probe_json = Json::array();
  for (const auto& p : st.probes) {
    const std::string s = p.sentence.text();
    const std::string raw =
        chat.ask(Phase::post_testing, {correction_prompt(s), {}, learners::OpenQuery{s}});
    const int type = static_cast<int>(p.error);
    ProbeGrade g = grade_correction(raw, st.vocabulary);
    std::string by = "heuristic";
    if (auto it = overrides.find({run_id, type}); it != overrides.end()) {
      g.explains = it->second.explains;
      if (it->second.fixes >= 0) g.fixes = it->second.fixes;
      by = "override";
    }
    probes.rows.push_back({run_id, std::to_string(type), s, raw, std::to_string(g.explains),
                           std::to_string(g.fixes), by});
    probe_json.push_back({{"error_type", type}, {"explains", g.explains}, {"fixes", g.fixes}});
  }
  out.extra.push_back(std::move(probes));

  const auto score = score_run(records);
  Json trials = Json::array();
  for (int t = 0; t < kTestTrials; ++t) {
    const auto& e = score.trials[static_cast<std::size_t>(t)];
    trials.push_back({{"trial", t + 1},
                      {"false_positives", e.false_positives},
                      {"false_negatives", e.false_negatives},
                      {"total_errors", e.total_errors()},
                      {"unparseable", e.unparseable}});
  }
  out.metrics = base_metrics(cfg);
  out.metrics["frequency"] = st.vocabulary.frequency;
  out.metrics["subcondition"] = st.vocabulary.subcondition;
  out.metrics["trials"] = trials;
  out.metrics["tp"] = score.tp;
  out.metrics["fp"] = score.fp;
  out.metrics["fn"] = score.fn;
  out.metrics["tn"] = score.tn;
  out.metrics["unparseable"] = score.unparseable;
  out.metrics["precision"] = score.precision;
  out.metrics["recall"] = score.recall;
  out.metrics["novel_tp"] = score.novel_tp;
  out.metrics["novel_fn"] = score.novel_fn;
  out.metrics["novel_recall"] = score.novel_recall;
  out.metrics["probes"] = probe_json;
  return out;
}

// --- syntax ------------------------------------------------------------------

RunResult run_syntax(const RunConfig& cfg, Conversation& chat) {
  const auto st = syntax_stimuli(cfg);
  const auto& plan = cfg.options.block_plan;
  chat.ask(Phase::starting, {fsg::starting_prompt(st.grammar.alphabet(), plan.sentences_per_block()), {}, {}});

  const std::string run_id = cfg.run_id();
  RunResult out;
  out.results.file_name = "results.csv";
  out.results.rows.push_back(
      {"run_id", "grammar", "block", "item_index", "sentence", "label", "raw", "parsed", "correct"});
  std::vector<fsg::SyntaxTrialRecord> records;
  int item_index = 0;
  const int n_blocks = static_cast<int>(st.blocks.size());
  for (int b = 0; b < n_blocks; ++b) {
    std::optional<fsg::Feedback> prev;
    for (const auto& s : st.blocks[static_cast<std::size_t>(b)]) {
      Prompt p{fsg::render_learning_turn(prev, s.text()), {}, learners::YesNoQuery{s.text()}};
      if (prev) p.events.emplace_back(learners::SentenceExposure{prev->sentence, prev->grammatical});
      const std::string raw = chat.ask(Phase::learning, p);
      const auto yes = fsg::parse_yes_no(raw);
      std::optional<std::string> parsed;
      if (yes) parsed = *yes ? "yes" : "no";
      const std::string truth = s.grammatical ? "yes" : "no";
      TrialRecord rec(run_id, ++item_index, s.text(), truth, raw, parsed);
      out.results.rows.push_back({run_id, st.grammar.name(), std::to_string(b + 1),
                                  std::to_string(item_index), s.text(),
                                  s.grammatical ? "grammatical" : "ungrammatical", raw,
                                  parsed.value_or(""),
                                  rec.correct() ? (*rec.correct() ? "1" : "0") : ""});
      prev = fsg::Feedback{rec.correct().value_or(false), s.text(), s.grammatical};
      records.push_back({std::move(rec), b + 1});
    }
    Prompt end{fsg::render_learning_turn(prev, std::nullopt, b + 1, b + 1 < n_blocks), {}, {}};
    end.events.emplace_back(learners::SentenceExposure{prev->sentence, prev->grammatical});
    chat.ask(Phase::learning, end);
  }

  const auto qs = fsg::questions(st.grammar);
  const std::string reply = chat.ask(
      Phase::post_testing,
      {fsg::post_testing_prompt(qs), {},
       learners::QuestionnaireQuery{static_cast<int>(qs.size()), st.grammar.alphabet()}});
  auto qrng = Rng(cfg.seeds.stimulus_seed).split("questionnaire");
  const auto truth = fsg::questionnaire_ground_truth(st.grammar, cfg.options.questionnaire_corpus, qrng,
                                                     plan.length);
  const auto answers = fsg::split_numbered_answers(reply, static_cast<int>(qs.size()));
  Table qtable{"questionnaire.csv", {{"run_id", "question", "truth", "answer", "score"}}};
  Json qscores = Json::array();
  double qsum = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double sc = fsg::grade_answer(answers[i], truth[i].answer);
    qsum += sc;
    qscores.push_back(sc);
    qtable.rows.push_back({run_id, std::to_string(i + 1),
                           std::string(truth[i].answer.begin(), truth[i].answer.end()), answers[i],
                           num(sc)});
  }
  out.extra.push_back(std::move(qtable));

  const auto blocks = fsg::score_blocks(records);
  Json acc = Json::array(), judged = Json::array(), unparse = Json::array();
  int correct = 0, n_judged = 0;
  for (const auto& b : blocks) {
    acc.push_back(b.accuracy);
    judged.push_back(b.judged);
    unparse.push_back(b.unparseable);
    n_judged += b.judged;
  }
  for (const auto& r : records) correct += r.record.correct().value_or(false);
  out.metrics = base_metrics(cfg);
  out.metrics["grammar"] = st.grammar.name();
  out.metrics["block_accuracy"] = acc;
  out.metrics["block_judged"] = judged;
  out.metrics["block_unparseable"] = unparse;
  out.metrics["correct"] = correct;
  out.metrics["judged"] = n_judged;
  out.metrics["questionnaire"] = qscores;
  out.metrics["questionnaire_mean"] = qsum / static_cast<double>(truth.size());
  return out;
}

}  // namespace

Conversation::Conversation(learners::Learner& learner, Transcript& transcript, Clock clock)
    : session_(learner), transcript_(&transcript), clock_(std::move(clock)) {}

std::string Conversation::ask(Phase phase, const Prompt& prompt) {
  const std::string sent_at = clock_();
  std::string reply = session_.send(prompt);
  transcript_->append(phase, Role::user, prompt.text, sent_at);
  transcript_->append(phase, Role::assistant, reply, clock_());
  return reply;
}

MorphStimuli morphology_stimuli(const RunConfig& cfg) {
  MorphStimuli st{morphology::build_lexicon(cfg.condition), {}, {}};
  auto order = Rng(cfg.seeds.order_seed).split("paragraphs");
  st.paragraphs = morphology::render_learning_paragraphs(st.lexicon, order);
  auto items = Rng(cfg.seeds.stimulus_seed).split("test-items");
  st.items = morphology::build_test_items(items);
  return st;
}

MsStimuli morphosyntax_stimuli(const RunConfig& cfg) {
  using namespace morphosyntax;
  const Rng root(cfg.seeds.stimulus_seed);
  auto vocab = build_vocabulary(cfg.condition);
  auto r_train = root.split("training");
  auto training = generate_training_set(vocab, r_train);
  TestSetOptions opts;
  opts.type2 = cfg.options.printed_type2 ? Type2Style::as_printed : Type2Style::pure;
  if (cfg.options.reuse_training_items) opts.reuse_from = &training;
  auto r_test = root.split("test");
  auto test = generate_test_set(vocab, r_test, opts);
  auto r_probe = root.split("probe");
  auto probes = correction_probe_items(vocab, r_probe, opts.type2);
  return {std::move(vocab), std::move(training), std::move(test), probes};
}

fsg::Fsg load_grammar(const RunConfig& cfg) {
  const bool is_a = cfg.condition.label() == "grammarA";
  const auto& file = is_a ? cfg.options.grammar_a_file : cfg.options.grammar_b_file;
  if (!file) return is_a ? fsg::grammar_a() : fsg::grammar_b();
  auto in = open_input(*file);
  try {
    return fsg::parse_grammar(in);
  } catch (const std::exception& e) {
    throw ConfigError("grammar file " + file->string() + ": " + e.what());
  }
}

SyntaxStimuli syntax_stimuli(const RunConfig& cfg) {
  auto g = load_grammar(cfg);
  auto r = Rng(cfg.seeds.stimulus_seed).split("blocks");
  auto blocks = fsg::build_blocks(g, cfg.options.block_plan, r);
  return {std::move(g), std::move(blocks)};
}

Json stimuli_json(const RunConfig& cfg) {
  Json j{{"run_id", cfg.run_id()},
         {"experiment", to_string(cfg.condition.experiment())},
         {"condition", cfg.condition.label()},
         {"seeds", seeds_json(cfg)}};
  switch (cfg.condition.experiment()) {
    case Experiment::morphology: {
      const auto st = morphology_stimuli(cfg);
      Json paragraphs = Json::array();
      for (const auto& p : st.paragraphs) paragraphs.push_back({{"noun", p.noun}, {"text", p.text}});
      Json items = Json::array();
      for (const auto& i : st.items) items.push_back({{"noun", i.noun}, {"number", i.number_word}});
      j["paragraphs"] = paragraphs;
      j["test_items"] = items;
      break;
    }
    case Experiment::morphosyntax: {
      const auto st = morphosyntax_stimuli(cfg);
      Json training = Json::array();
      for (const auto& s : st.training) training.push_back(s.text());
      Json test = Json::array();
      for (const auto& trial : st.test) {
        Json t = Json::array();
        for (const auto& item : trial)
          t.push_back({{"sentence", item.sentence.text()}, {"error_type", static_cast<int>(item.error)}});
        test.push_back(t);
      }
      Json probes = Json::array();
      for (const auto& p : st.probes)
        probes.push_back({{"sentence", p.sentence.text()}, {"error_type", static_cast<int>(p.error)}});
      j["training"] = training;
      j["test_trials"] = test;
      j["correction_probes"] = probes;
      break;
    }
    case Experiment::syntax: {
      const auto st = syntax_stimuli(cfg);
      Json blocks = Json::array();
      for (const auto& b : st.blocks) {
        Json block = Json::array();
        for (const auto& s : b)
          block.push_back({{"sentence", s.text()}, {"grammatical", s.grammatical}, {"pair", s.pair_id.value_or(-1)}});
        blocks.push_back(block);
      }
      j["grammar"] = fsg::format_grammar(st.grammar);
      j["blocks"] = blocks;
      break;
    }
  }
  return j;
}

RunResult run_experiment(const RunConfig& cfg, learners::Learner& learner, Transcript& transcript,
                         const Clock& clock) {
  Conversation chat(learner, transcript, clock);
  switch (cfg.condition.experiment()) {
    case Experiment::morphology: return run_morphology(cfg, chat);
    case Experiment::morphosyntax: return run_morphosyntax(cfg, chat);
    case Experiment::syntax: return run_syntax(cfg, chat);
  }
  throw std::logic_error("unreachable");
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) write_csv_row(os, r);
  return os.str();
}

}  // namespace implang::harness
