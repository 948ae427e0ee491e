#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "implang/core/csv.hpp"
#include "implang/core/transcript.hpp"
#include "implang/fsg/generation.hpp"
#include "implang/fsg/grammar.hpp"
#include "implang/harness/config.hpp"
#include "implang/learners/learner.hpp"
#include "implang/morphology/lexicon.hpp"
#include "implang/morphosyntax/generation.hpp"
#include "implang/morphosyntax/vocabulary.hpp"

namespace implang::harness {

using Json = nlohmann::ordered_json;

/// Scoring found nothing to score (e.g. every morphology reply unparseable).
class RunInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sends prompts through a TextSession and mirrors each completed exchange
/// into the transcript, so a failure leaves only whole exchanges behind.
class Conversation {
 public:
  Conversation(learners::Learner& learner, Transcript& transcript, Clock clock);

  std::string ask(Phase phase, const learners::Prompt& prompt);

 private:
  learners::TextSession session_;
  Transcript* transcript_;
  Clock clock_;
};

struct Table {
  std::string file_name;
  std::vector<CsvRow> rows;  // header first
};

struct RunResult {
  Table results;
  std::vector<Table> extra;  // probes.csv, questionnaire.csv
  Json metrics;
};

struct MorphStimuli {
  morphology::MorphLexicon lexicon;
  std::vector<morphology::Paragraph> paragraphs;
  std::vector<morphology::TestItem> items;
};
MorphStimuli morphology_stimuli(const RunConfig& cfg);

struct MsStimuli {
  morphosyntax::MsVocabulary vocabulary;
  std::vector<morphosyntax::MsSentence> training;
  std::vector<std::vector<morphosyntax::LabeledSentence>> test;
  std::array<morphosyntax::LabeledSentence, 4> probes;
};
MsStimuli morphosyntax_stimuli(const RunConfig& cfg);

/// Built-in grammar unless the options name a grammar file.
fsg::Fsg load_grammar(const RunConfig& cfg);

struct SyntaxStimuli {
  fsg::Fsg grammar;
  std::vector<fsg::Block> blocks;
};
SyntaxStimuli syntax_stimuli(const RunConfig& cfg);

/// Stimuli of one run as JSON (the `generate` subcommand).
Json stimuli_json(const RunConfig& cfg);

/// Runs all phases against `learner`, appending to `transcript`, then scores.
/// Learner failures propagate as LearnerError; RunInvalid when unscorable.
RunResult run_experiment(const RunConfig& cfg, learners::Learner& learner, Transcript& transcript,
                         const Clock& clock);

std::string to_csv(const std::vector<CsvRow>& rows);

}  // namespace implang::harness
