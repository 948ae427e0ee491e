#include "implang/morphosyntax/vocabulary.hpp"

#include <algorithm>
#include <stdexcept>

namespace implang::morphosyntax {

bool is_marker(WordClass c) { return c == WordClass::marker_a || c == WordClass::marker_b; }

bool same_family(WordClass marker, WordClass content) {
  return (marker == WordClass::marker_a && content == WordClass::content_a) ||
         (marker == WordClass::marker_b && content == WordClass::content_b);
}

const std::vector<std::string>& inventory() {
  static const std::vector<std::string> kWords{
      "alt",  "erd",   "ong",  "ush",  "deech", "tasp", "vabe",  "kicey",
      "logoth", "puser", "hift", "ghope", "skige", "cumo", "fengle", "wadim"};
  return kWords;
}

std::optional<WordClass> MsVocabulary::class_of(std::string_view word) const {
  auto in = [&](const std::vector<std::string>& v) {
    return std::find(v.begin(), v.end(), word) != v.end();
  };
  if (in(markers_a)) return WordClass::marker_a;
  if (in(markers_b)) return WordClass::marker_b;
  if (in(content_a)) return WordClass::content_a;
  if (in(content_b)) return WordClass::content_b;
  return std::nullopt;
}

const std::vector<std::string>& MsVocabulary::words_of(WordClass c) const {
  switch (c) {
    case WordClass::marker_a: return markers_a;
    case WordClass::marker_b: return markers_b;
    case WordClass::content_a: return content_a;
    case WordClass::content_b: return content_b;
  }
  throw std::logic_error("bad word class");
}

std::vector<std::string> MsVocabulary::words() const {
  std::vector<std::string> out;
  for (const auto* v : {&markers_a, &markers_b, &content_a, &content_b}) {
    out.insert(out.end(), v->begin(), v->end());
  }
  return out;
}

MsVocabulary build_vocabulary(std::string_view frequency, std::string_view subcondition) {
  if (subcondition != "S1" && subcondition != "S2") {
    throw std::invalid_argument("unknown subcondition '" + std::string(subcondition) + "'");
  }
  const bool s1 = subcondition == "S1";
  MsVocabulary v;
  v.frequency = std::string(frequency);
  v.subcondition = std::string(subcondition);
  if (frequency == "high") {
    v.markers_a = {s1 ? "alt" : "ong"};
    v.markers_b = {s1 ? "erd" : "ush"};
    v.content_a = {"deech", "tasp", "vabe", "kicey", "logoth", "puser"};
    v.content_b = {"hift", "ghope", "skige", "cumo", "fengle", "wadim"};
  } else if (frequency == "low") {
    v.markers_a = {"alt", "ong"};
    v.markers_b = {"erd", "ush"};
    if (s1) {
      v.content_a = {"puser", "tasp", "deech"};
      v.content_b = {"ghope", "hift", "wadim"};
    } else {
      v.content_a = {"vabe", "kicey", "logoth"};
      v.content_b = {"skige", "cumo", "fengle"};
    }
  } else {
    throw std::invalid_argument("unknown frequency condition '" + std::string(frequency) + "'");
  }
  return v;
}

MsVocabulary build_vocabulary(const ConditionId& condition) {
  if (condition.experiment() != Experiment::morphosyntax) {
    throw std::invalid_argument("not a morphosyntax condition: " + condition.str());
  }
  const auto& label = condition.label();
  const auto dash = label.find('-');
  return build_vocabulary(label.substr(0, dash), label.substr(dash + 1));
}

}  // namespace implang::morphosyntax
