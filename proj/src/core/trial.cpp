#include "implang/core/trial.hpp"

namespace implang {

TrialRecord::TrialRecord(std::string run_id, int trial_index, std::string stimulus,
                         std::string ground_truth, std::string raw_response,
                         std::optional<std::string> parsed)
    : run_id_(std::move(run_id)),
      trial_index_(trial_index),
      stimulus_(std::move(stimulus)),
      ground_truth_(std::move(ground_truth)),
      raw_response_(std::move(raw_response)),
      parsed_(std::move(parsed)) {
  if (parsed_) correct_ = (*parsed_ == ground_truth_);
}

}  // namespace implang
