#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "implang/core/rng.hpp"

namespace implang::analysis {

struct StatResult {
  std::string name;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::optional<double> bayes_factor;
  std::string method;
  std::vector<int> n;
};

/// Runs x blocks.
using BlockMatrix = std::vector<std::vector<double>>;

/// Two-sided comparison of k1/n1 and k2/n2. Fisher's exact test when either
/// sample is below kExactThreshold, pooled z test otherwise.
inline constexpr int kExactThreshold = 30;
StatResult two_proportion_test(int k1, int n1, int k2, int n2);
double fisher_exact_two_sided(int k1, int n1, int k2, int n2);

/// Throws std::domain_error when either vector has zero variance.
StatResult pearson_correlation(std::span<const double> x, std::span<const double> y);
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Average ranks for ties; returns 0 when a side is constant.
double spearman_rho(std::span<const double> x, std::span<const double> y);
std::vector<double> average_ranks(std::span<const double> v);

/// Statistic: mean Spearman correlation of block index with accuracy.
/// Each permutation shuffles every run's accuracies independently.
/// p = (b + 1) / (n_perm + 1) with b = permutations at or above observed.
StatResult permutation_trend_test(const BlockMatrix& runs, int n_perm, Rng& rng);

/// BF10 from BIC: intercept-only vs block as a categorical factor.
StatResult bf_bic_block_effect(const BlockMatrix& runs);
/// Same but the alternative is restricted to non-decreasing block means
/// (isotonic fit), still charged one parameter per block.
StatResult bf_bic_learning_direction(const BlockMatrix& runs);

/// Pool-adjacent-violators fit of a non-decreasing sequence.
std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights);

}  // namespace implang::analysis
