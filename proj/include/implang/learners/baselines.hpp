#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "implang/learners/learner.hpp"

namespace implang::learners {

/// Samples a plural marker in proportion to its token frequency.
class FrequencyMatching : public StructuredLearner {
 public:
  void observe(const StructuredEvent& event) override;
  StructuredAnswer answer(const StructuredQuery& query, Rng& rng) override;
  std::string name() const override { return "frequency"; }

  const std::map<std::string, int>& counts() const { return counts_; }

 private:
  std::map<std::string, int> counts_;
};

/// Always produces the marker carried by the most noun types. Ties go to
/// the lexicographically smallest marker.
class MajorityType : public StructuredLearner {
 public:
  void observe(const StructuredEvent& event) override;
  StructuredAnswer answer(const StructuredQuery& query, Rng& rng) override;
  std::string name() const override { return "majority"; }

  std::string majority_marker() const;

 private:
  std::map<std::string, std::string> marker_of_;  // noun type -> first marker seen
};

/// Judges a sentence grammatical iff it was seen as a grammatical exemplar.
class ExemplarJudge : public StructuredLearner {
 public:
  void observe(const StructuredEvent& event) override;
  StructuredAnswer answer(const StructuredQuery& query, Rng& rng) override;
  std::string name() const override { return "exemplar"; }

 private:
  std::vector<std::vector<std::string>> exemplars_;
  std::set<std::vector<std::string>> seen_;
};

/// Accepts a sentence iff every word bigram, including the boundaries, was
/// attested in a grammatical exposure.
class Bigram : public StructuredLearner {
 public:
  void observe(const StructuredEvent& event) override;
  StructuredAnswer answer(const StructuredQuery& query, Rng& rng) override;
  std::string name() const override { return "bigram"; }

  bool accepts(const std::string& sentence) const;

 private:
  std::set<std::pair<std::string, std::string>> bigrams_;
};

/// Uniform choices over each query's answer space.
class RandomResponder : public StructuredLearner {
 public:
  void observe(const StructuredEvent& event) override;
  StructuredAnswer answer(const StructuredQuery& query, Rng& rng) override;
  std::string name() const override { return "random"; }

 private:
  std::set<std::string> markers_;
};

/// Names accepted: frequency, majority, exemplar, bigram, random.
std::unique_ptr<StructuredLearner> make_baseline(const std::string& name);
std::vector<std::string> baseline_names();

}  // namespace implang::learners
