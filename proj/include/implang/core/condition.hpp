#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace implang {

enum class Experiment { morphology, morphosyntax, syntax };

std::string_view to_string(Experiment e);
/// Throws std::invalid_argument for unknown names.
Experiment parse_experiment(std::string_view name);

/// Labels accepted for an experiment, in canonical order.
std::span<const std::string_view> valid_conditions(Experiment e);

/// An experiment plus one of its enumerated condition labels.
class ConditionId {
 public:
  /// Throws std::invalid_argument if the label is not valid for the experiment.
  ConditionId(Experiment experiment, std::string_view label);

  Experiment experiment() const { return experiment_; }
  const std::string& label() const { return label_; }
  std::string str() const;

  friend bool operator==(const ConditionId&, const ConditionId&) = default;

 private:
  Experiment experiment_;
  std::string label_;
};

}  // namespace implang
