#include "implang/core/condition.hpp"

#include <algorithm>
#include <array>

namespace implang {

namespace {

constexpr std::array<std::string_view, 2> kMorphology{"5R4E", "3R6E"};
constexpr std::array<std::string_view, 4> kMorphosyntax{"high-S1", "high-S2", "low-S1", "low-S2"};
constexpr std::array<std::string_view, 2> kSyntax{"grammarA", "grammarB"};

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::morphology: return "morphology";
    case Experiment::morphosyntax: return "morphosyntax";
    case Experiment::syntax: return "syntax";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  if (name == "morphology") return Experiment::morphology;
  if (name == "morphosyntax") return Experiment::morphosyntax;
  if (name == "syntax") return Experiment::syntax;
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::span<const std::string_view> valid_conditions(Experiment e) {
  switch (e) {
    case Experiment::morphology: return kMorphology;
    case Experiment::morphosyntax: return kMorphosyntax;
    case Experiment::syntax: return kSyntax;
  }
  return {};
}

ConditionId::ConditionId(Experiment experiment, std::string_view label)
    : experiment_(experiment), label_(label) {
  const auto labels = valid_conditions(experiment);
  if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
    throw std::invalid_argument("condition '" + label_ + "' is not valid for experiment " +
                                std::string(to_string(experiment)));
  }
}

std::string ConditionId::str() const { return std::string(to_string(experiment_)) + "/" + label_; }

}  // namespace implang
