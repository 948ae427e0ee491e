#include "implang/morphosyntax/scoring.hpp"

#include <cctype>
#include <stdexcept>

#include "implang/core/csv.hpp"
#include "implang/core/text.hpp"

namespace implang::morphosyntax {

std::string_view to_string(Judgment j) {
  return j == Judgment::correct ? "correct" : "incorrect";
}

std::optional<Judgment> parse_judgment(std::string_view raw) {
  if (text::contains_word(raw, "incorrect") || text::contains_word(raw, "not correct")) {
    return Judgment::incorrect;
  }
  if (text::contains_word(raw, "correct")) return Judgment::correct;
  return std::nullopt;
}

int TrialErrors::all_false_positives() const {
  int sum = 0;
  for (int v : false_positives) sum += v;
  return sum;
}

int TrialErrors::total_errors() const { return all_false_positives() + false_negatives; }

MsRunScore score_run(std::span<const MsTrialRecord> records) {
  if (records.size() != kTestItems) {
    throw std::invalid_argument("score_run: expected 96 records, got " +
                                std::to_string(records.size()));
  }
  MsRunScore s;
  for (const auto& r : records) {
    if (r.trial < 1 || r.trial > 4) throw std::invalid_argument("score_run: trial out of range");
    auto& t = s.trials[static_cast<std::size_t>(r.trial - 1)];
    const auto& parsed = r.record.parsed();
    if (!parsed) {
      ++t.unparseable;
      ++s.unparseable;
      continue;
    }
    const bool said_correct = *parsed == "correct";
    if (r.error == ErrorType::none) {
      if (said_correct) {
        ++s.tp;
        if (r.novel) ++s.novel_tp;
      } else {
        ++s.fn;
        ++t.false_negatives;
        if (r.novel) ++s.novel_fn;
      }
    } else if (said_correct) {
      ++s.fp;
      ++t.false_positives[static_cast<std::size_t>(r.error) - 1];
    } else {
      ++s.tn;
    }
  }
  s.precision = (s.tp + s.fp) == 0 ? 1.0 : static_cast<double>(s.tp) / (s.tp + s.fp);
  s.recall = (s.tp + s.fn) == 0 ? 0.0 : static_cast<double>(s.tp) / (s.tp + s.fn);
  s.novel_recall =
      (s.novel_tp + s.novel_fn) == 0 ? 0.0 : static_cast<double>(s.novel_tp) / (s.novel_tp + s.novel_fn);
  return s;
}

std::array<LabeledSentence, 4> correction_probe_items(const MsVocabulary& v, Rng& rng,
                                                      Type2Style style) {
  std::array<LabeledSentence, 4> out;
  for (std::size_t i = 0; i < kErrorTypes.size(); ++i) {
    const MsSentence base = sample_grammatical(v, rng);
    out[i] = {make_error(base, kErrorTypes[i], v, rng, style), kErrorTypes[i]};
  }
  return out;
}

std::vector<std::array<std::string, 4>> extract_candidates(std::string_view reply,
                                                           const MsVocabulary& v) {
  std::vector<std::array<std::string, 4>> out;
  std::vector<std::string> run;
  auto flush = [&] {
    if (run.size() == 4) out.push_back({run[0], run[1], run[2], run[3]});
    run.clear();
  };
  std::string word;
  auto end_word = [&] {
    if (word.empty()) return;
    const std::string w = text::lower(word);
    word.clear();
    if (v.class_of(w)) {
      run.push_back(w);
    } else {
      flush();
    }
  };
  for (char c : reply) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      word += c;
      continue;
    }
    end_word();
    if (c == ' ' || c == '\t' || c == ',') continue;
    // quotes, newlines, sentence punctuation, arrows and brackets close a run
    flush();
  }
  end_word();
  flush();
  return out;
}

ProbeGrade grade_correction(std::string_view reply, const MsVocabulary& v) {
  ProbeGrade g;
  for (const auto& cand : extract_candidates(reply, v)) {
    if (is_grammatical(std::span<const std::string>(cand), v)) {
      g.fixes = 1;
      break;
    }
  }
  return g;
}

std::map<std::pair<std::string, int>, ProbeGrade> read_probe_overrides(std::istream& in) {
  std::map<std::pair<std::string, int>, ProbeGrade> out;
  const auto rows = read_csv(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i == 0 && !row.empty() && row[0] == "run_id") continue;
    if (row.size() == 1 && text::trim(row[0]).empty()) continue;
    if (row.size() < 3 || row.size() > 4) {
      throw std::runtime_error("probe override row " + std::to_string(i + 1) +
                               ": expected 3 or 4 fields");
    }
    ProbeGrade g;
    const int type = std::stoi(row[1]);
    if (type < 1 || type > 4) throw std::runtime_error("probe override: error_type must be 1..4");
    g.explains = std::stoi(row[2]) != 0 ? 1 : 0;
    g.fixes = row.size() == 4 ? (std::stoi(row[3]) != 0 ? 1 : 0) : -1;
    out[{text::trim(row[0]), type}] = g;
  }
  return out;
}

}  // namespace implang::morphosyntax
