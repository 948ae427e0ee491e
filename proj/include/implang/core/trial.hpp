#pragma once

#include <optional>
#include <string>

namespace implang {

/// One scored test interaction. `correct` is set exactly when `parsed` is.
class TrialRecord {
 public:
  TrialRecord(std::string run_id, int trial_index, std::string stimulus, std::string ground_truth,
              std::string raw_response, std::optional<std::string> parsed);

  const std::string& run_id() const { return run_id_; }
  int trial_index() const { return trial_index_; }
  const std::string& stimulus() const { return stimulus_; }
  const std::string& ground_truth() const { return ground_truth_; }
  const std::string& raw_response() const { return raw_response_; }
  const std::optional<std::string>& parsed() const { return parsed_; }
  std::optional<bool> correct() const { return correct_; }
  bool parseable() const { return parsed_.has_value(); }

 private:
  std::string run_id_;
  int trial_index_;
  std::string stimulus_;
  std::string ground_truth_;
  std::string raw_response_;
  std::optional<std::string> parsed_;
  std::optional<bool> correct_;
};

}  // namespace implang
