#include "implang/morphosyntax/generation.hpp"

#include <sstream>
#include <stdexcept>

#include "implang/core/text.hpp"

namespace implang::morphosyntax {

std::string MsSentence::text() const {
  return words[0] + " " + words[1] + " " + words[2] + " " + words[3];
}

std::string MsSentence::order_tag(const MsVocabulary& v) const {
  const auto c = v.class_of(words[0]);
  if (c == WordClass::marker_a) return "AB";
  if (c == WordClass::marker_b) return "BA";
  return "";
}

std::string_view to_string(ErrorType t) {
  switch (t) {
    case ErrorType::none: return "none";
    case ErrorType::order: return "order";
    case ErrorType::category: return "category";
    case ErrorType::single_assoc: return "single_association";
    case ErrorType::double_assoc: return "double_association";
  }
  return "?";
}

bool is_grammatical(std::span<const std::string> tokens, const MsVocabulary& v) {
  if (tokens.size() != 4) return false;
  std::array<WordClass, 4> cls{};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto c = v.class_of(tokens[i]);
    if (!c) return false;
    cls[i] = *c;
  }
  const bool p1 = is_marker(cls[0]) && same_family(cls[0], cls[1]);
  const bool p2 = is_marker(cls[2]) && same_family(cls[2], cls[3]);
  return p1 && p2 && cls[0] != cls[2];
}

bool is_grammatical(const MsSentence& s, const MsVocabulary& v) {
  return is_grammatical(std::span<const std::string>(s.words), v);
}

bool is_grammatical(std::string_view sentence, const MsVocabulary& v) {
  std::istringstream is{std::string(sentence)};
  std::vector<std::string> tokens;
  for (std::string w; is >> w;) tokens.push_back(w);
  return is_grammatical(std::span<const std::string>(tokens), v);
}

namespace {

MsSentence assemble(const std::string& a, const std::string& A, const std::string& b,
                    const std::string& B, bool ab_first) {
  if (ab_first) return MsSentence{{a, A, b, B}};
  return MsSentence{{b, B, a, A}};
}

/// `total` slots filled with each word equally often, shuffled.
std::vector<std::string> balanced(const std::vector<std::string>& words, int total, Rng& rng) {
  if (words.empty() || total % static_cast<int>(words.size()) != 0) {
    throw std::logic_error("cannot balance census");
  }
  std::vector<std::string> out;
  const int each = total / static_cast<int>(words.size());
  for (const auto& w : words) out.insert(out.end(), static_cast<std::size_t>(each), w);
  shuffle_in_place(out, rng);
  return out;
}

constexpr int kTrainingSize = 24;

}  // namespace

MsSentence sample_grammatical(const MsVocabulary& v, Rng& rng) {
  const auto& a = pick(v.markers_a, rng);
  const auto& A = pick(v.content_a, rng);
  const auto& b = pick(v.markers_b, rng);
  const auto& B = pick(v.content_b, rng);
  return assemble(a, A, b, B, rng.bernoulli(0.5));
}

std::vector<MsSentence> generate_training_set(const MsVocabulary& v, Rng& rng) {
  const auto a = balanced(v.markers_a, kTrainingSize, rng);
  const auto A = balanced(v.content_a, kTrainingSize, rng);
  const auto b = balanced(v.markers_b, kTrainingSize, rng);
  const auto B = balanced(v.content_b, kTrainingSize, rng);
  std::vector<MsSentence> out;
  out.reserve(kTrainingSize);
  for (std::size_t i = 0; i < kTrainingSize; ++i) {
    out.push_back(assemble(a[i], A[i], b[i], B[i], i < kTrainingSize / 2));
  }
  shuffle_in_place(out, rng);
  return out;
}

MsSentence make_error(const MsSentence& base, ErrorType t, const MsVocabulary& v, Rng& rng,
                      Type2Style style) {
  if (!is_grammatical(base, v)) {
    throw std::invalid_argument("make_error: base '" + base.text() + "' is not grammatical");
  }
  MsSentence out = base;
  const std::size_t phrase = rng.bernoulli(0.5) ? 2 : 0;
  const std::size_t other = 2 - phrase;
  switch (t) {
    case ErrorType::none:
      throw std::invalid_argument("make_error: error type must not be none");
    case ErrorType::order:
      std::swap(out.words[phrase], out.words[phrase + 1]);
      break;
    case ErrorType::category: {
      const auto cls = *v.class_of(base.words[phrase + 1]);
      std::vector<std::string> pool;
      for (const auto& w : v.words_of(cls)) {
        if (w != base.words[phrase + 1]) pool.push_back(w);
      }
      out.words[phrase] = pick(pool, rng);
      if (style == Type2Style::as_printed) std::swap(out.words[other], out.words[other + 1]);
      break;
    }
    case ErrorType::single_assoc: {
      const auto cls = *v.class_of(base.words[phrase + 1]);
      const auto flipped = cls == WordClass::content_a ? WordClass::content_b : WordClass::content_a;
      out.words[phrase + 1] = pick(v.words_of(flipped), rng);
      break;
    }
    case ErrorType::double_assoc:
      std::swap(out.words[1], out.words[3]);
      break;
  }
  if (is_grammatical(out, v)) {
    throw std::logic_error("make_error produced a grammatical sentence: " + out.text());
  }
  return out;
}

std::vector<std::vector<LabeledSentence>> generate_test_set(const MsVocabulary& v, Rng& rng,
                                                            const TestSetOptions& opts) {
  std::vector<std::vector<LabeledSentence>> trials;
  std::vector<MsSentence> reuse_pool;
  if (opts.reuse_from) reuse_pool = *opts.reuse_from;
  for (int trial = 0; trial < kTestTrials; ++trial) {
    std::vector<LabeledSentence> items;
    if (opts.reuse_from) {
      shuffle_in_place(reuse_pool, rng);
      for (int i = 0; i < kGrammaticalPerTrial; ++i) {
        items.push_back({reuse_pool[static_cast<std::size_t>(i) % reuse_pool.size()],
                         ErrorType::none});
      }
    } else {
      for (int i = 0; i < kGrammaticalPerTrial; ++i) {
        items.push_back({sample_grammatical(v, rng), ErrorType::none});
      }
    }
    for (ErrorType t : kErrorTypes) {
      for (int i = 0; i < kErrorsPerTypePerTrial; ++i) {
        const MsSentence base = sample_grammatical(v, rng);
        items.push_back({make_error(base, t, v, rng, opts.type2), t});
      }
    }
    shuffle_in_place(items, rng);
    trials.push_back(std::move(items));
  }
  return trials;
}

}  // namespace implang::morphosyntax
