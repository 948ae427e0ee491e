#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "implang/analysis/references.hpp"
#include "implang/analysis/stats.hpp"
#include "implang/core/rng.hpp"

namespace implang::analysis {
namespace {

// Pascal's triangle, exact integers.
std::vector<std::vector<std::uint64_t>> pascal(int n) {
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    c[i].assign(static_cast<std::size_t>(i + 1), 1);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

// Two-sided Fisher p by enumerating every table with the same margins and
// comparing integer weights exactly.
double fisher_oracle(int k1, int n1, int k2, int n2) {
  static const auto C = pascal(24);
  const int K = k1 + k2;
  const auto w = [&](int x) { return C[n1][x] * C[n2][K - x]; };
  const std::uint64_t observed = w(k1);
  std::uint64_t total = 0, extreme = 0;
  for (int x = std::max(0, K - n2); x <= std::min(K, n1); ++x) {
    total += w(x);
    if (w(x) <= observed) extreme += w(x);
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

TEST(Fisher, MatchesEnumerationOracleForAllSmallTables) {
  int checked = 0;
  for (int n1 = 1; n1 <= 12; ++n1)
    for (int n2 = 1; n2 <= 12; ++n2)
      for (int k1 = 0; k1 <= n1; ++k1)
        for (int k2 = 0; k2 <= n2; ++k2) {
          const auto r = two_proportion_test(k1, n1, k2, n2);
          ASSERT_EQ(r.method, "fisher_exact");
          ASSERT_NEAR(*r.p_value, fisher_oracle(k1, n1, k2, n2), 1e-9)
              << k1 << "/" << n1 << " vs " << k2 << "/" << n2;
          ++checked;
        }
  EXPECT_EQ(checked, 8100);
}

TEST(Fisher, KnownValue) {
  // 3/12 vs 10/12
  EXPECT_NEAR(fisher_exact_two_sided(3, 12, 10, 12), 0.012278137799742322, 1e-12);
}

TEST(TwoProportion, NormalApproximationForLargeSamples) {
  const auto r = two_proportion_test(78, 120, 62, 120);
  EXPECT_EQ(r.method, "normal_approx");
  const double p = 140.0 / 240, se = std::sqrt(p * (1 - p) * (2.0 / 120));
  const double z = (78.0 / 120 - 62.0 / 120) / se;
  EXPECT_NEAR(*r.p_value, std::erfc(std::abs(z) / std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(r.statistic, 16.0 / 120, 1e-15);
  EXPECT_DOUBLE_EQ(*two_proportion_test(0, 40, 0, 40).p_value, 1.0);
  EXPECT_THROW(two_proportion_test(5, 4, 1, 4), std::invalid_argument);
}

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

TEST(Pearson, MatchesRawSumFormula) {
  const std::vector<std::vector<double>> xs{
      {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {0, 0, 1, 1, 0, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1}, {3, 1, 2}};
  const std::vector<std::vector<double>> ys{
      {2, 1, 4, 3, 7, 8, 6, 9, 12, 10},
      {.5, .4, .8, .9, .3, .7, .75, .9, .45, .85, .6, .5, .95, .7, .8},
      {-1, 5, 0.25}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(pearson_r(xs[i], ys[i]), pearson_oracle(xs[i], ys[i]), 1e-12);
  }
  const auto r = pearson_correlation(xs[0], ys[0]);
  EXPECT_NEAR(r.statistic, 0.9261797113999298, 1e-12);
  EXPECT_NEAR(*r.p_value, 0.00011876275128516728, 1e-12);
  const auto r2 = pearson_correlation(xs[1], ys[1]);
  EXPECT_NEAR(*r2.p_value, 1.9021873513913173e-05, 1e-12);
}

TEST(Pearson, InvariantsAndErrors) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(12), y(12), x2(12);
    for (std::size_t i = 0; i < 12; ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + rng.normal();
      x2[i] = 3.5 * x[i] - 7;
    }
    const double r = pearson_r(x, y);
    ASSERT_LE(std::abs(r), 1.0);
    ASSERT_NEAR(pearson_r(x2, y), r, 1e-12);
    ASSERT_NEAR(pearson_r(y, x), r, 1e-15);
  }
  const std::vector<double> flat{1, 1, 1}, v{1, 2, 3};
  EXPECT_THROW(pearson_correlation(flat, v), std::domain_error);
  EXPECT_THROW(pearson_correlation(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
               std::invalid_argument);
  EXPECT_DOUBLE_EQ(*pearson_correlation(v, v).p_value, 0.0);
}

TEST(Spearman, RanksAndTies) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 20, 5}),
            (std::vector<double>{2, 3.5, 3.5, 1}));
  const std::vector<double> x{1, 2, 3, 4}, y{1, 4, 9, 16}, flat{2, 2, 2, 2};
  EXPECT_DOUBLE_EQ(spearman_rho(x, y), 1.0);
  EXPECT_DOUBLE_EQ(spearman_rho(x, flat), 0.0);
}

BlockMatrix synthetic_learning(std::uint64_t seed, int runs = 15, int blocks = 6) {
  Rng rng(seed);
  BlockMatrix m(static_cast<std::size_t>(runs));
  for (auto& r : m) {
    for (int b = 0; b < blocks; ++b) r.push_back(0.5 + 0.07 * b + 0.05 * rng.normal());
  }
  return m;
}

TEST(Trend, DetectsRisingCurves) {
  Rng rng(1);
  const auto r = permutation_trend_test(synthetic_learning(2), 2000, rng);
  EXPECT_LT(*r.p_value, 0.01);
  EXPECT_GT(r.statistic, 0.5);
}

TEST(Trend, NullIsNotSignificantOnAverage) {
  // p-values under the null are roughly uniform
  int below = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng noise(s);
    BlockMatrix m(10, std::vector<double>(6));
    for (auto& r : m)
      for (auto& v : r) v = noise.uniform01();
    Rng perm(1000 + s);
    below += *permutation_trend_test(m, 200, perm).p_value < 0.05;
  }
  EXPECT_LE(below, 14);
}

TEST(Trend, PValueFloor) {
  Rng rng(1);
  const BlockMatrix perfect(20, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  const auto r = permutation_trend_test(perfect, 99, rng);
  EXPECT_DOUBLE_EQ(r.statistic, 1.0);
  EXPECT_DOUBLE_EQ(*r.p_value, 1.0 / 100);
}

TEST(BayesFactor, HandComputed) {
  // values 0,1 | 1,2: RSS0 = 2, RSS1 = 1, N = 4 -> BF = exp(((4 ln .5 + ln 4) - (4 ln .25 + 2 ln 4)) / 2) = 2
  const BlockMatrix m{{0, 1}, {1, 2}};
  EXPECT_NEAR(*bf_bic_block_effect(m).bayes_factor, 2.0, 1e-12);
  EXPECT_NEAR(*bf_bic_learning_direction(m).bayes_factor, 2.0, 1e-12);
  // falling means: isotonic fit collapses to the grand mean
  const BlockMatrix down{{1, 0}, {2, 1}};
  EXPECT_NEAR(*bf_bic_learning_direction(down).bayes_factor, std::exp(-std::log(4.0) / 2), 1e-12);
}

TEST(BayesFactor, StrongForSyntheticLearning) {
  EXPECT_GT(*bf_bic_block_effect(synthetic_learning(7)).bayes_factor, 100.0);
  EXPECT_GT(*bf_bic_learning_direction(synthetic_learning(7)).bayes_factor, 100.0);
}

TEST(BayesFactor, FavoursNullWithoutEffect) {
  Rng rng(4);
  BlockMatrix m(15, std::vector<double>(6));
  for (auto& r : m)
    for (auto& v : r) v = 0.7 + 0.05 * rng.normal();
  EXPECT_LT(*bf_bic_block_effect(m).bayes_factor, 1.0);
}

TEST(BayesFactor, DegenerateInputs) {
  const BlockMatrix flat(3, std::vector<double>(4, 0.5));
  EXPECT_DOUBLE_EQ(*bf_bic_block_effect(flat).bayes_factor, 1.0);
  const BlockMatrix exact{{0, 1}, {0, 1}};
  EXPECT_THROW(bf_bic_block_effect(exact), std::domain_error);
  EXPECT_THROW(bf_bic_block_effect({}), std::domain_error);
  EXPECT_THROW(bf_bic_block_effect({{1, 2}, {1}}), std::domain_error);
}

TEST(Isotonic, PoolsViolators) {
  const std::vector<double> v{1, 3, 2, 4}, w{1, 1, 1, 1};
  EXPECT_EQ(isotonic_fit(v, w), (std::vector<double>{1, 2.5, 2.5, 4}));
  const std::vector<double> v2{3, 2, 1}, w2{1, 1, 2};
  const auto f = isotonic_fit(v2, w2);
  for (double x : f) EXPECT_DOUBLE_EQ(x, 7.0 / 4);
}

TEST(References, HumanValues) {
  EXPECT_DOUBLE_EQ(find_reference(Experiment::morphology, "5R4E", "regularization_rate").value, 0.650);
  EXPECT_DOUBLE_EQ(find_reference(Experiment::morphology, "3R6E", "regularization_rate").value, 0.517);
  EXPECT_EQ(find_reference(Experiment::morphology, "3R6E", "regularization_rate").n_trials, 120);
  EXPECT_DOUBLE_EQ(
      find_reference(Experiment::morphology, "5R4E", "regularization_rate", "gpt-4o").value, 0.417);
  EXPECT_DOUBLE_EQ(
      find_reference(Experiment::morphology, "3R6E", "regularization_rate", "o3-mini").value, 0.567);
  EXPECT_DOUBLE_EQ(
      find_reference(Experiment::morphosyntax, "high", "total_errors_trial1").value, 6.5);
  EXPECT_DOUBLE_EQ(find_reference(Experiment::morphosyntax, "high", "total_errors_all").value, 15.8);
  EXPECT_DOUBLE_EQ(find_reference(Experiment::morphosyntax, "low", "total_errors_all").value, 24.3);
  EXPECT_DOUBLE_EQ(find_reference(Experiment::morphosyntax, "low", "false_negatives_trial4").value, 1.7);
  EXPECT_DOUBLE_EQ(find_reference(Experiment::morphosyntax, "high", "errors_type3_all").value, 7.2);
  EXPECT_THROW(find_reference(Experiment::morphology, "5R4E", "nonsense"), std::out_of_range);
  EXPECT_EQ(reference_condition(Experiment::morphosyntax, "low-S2"), "low");
  EXPECT_EQ(reference_condition(Experiment::morphology, "5R4E"), "5R4E");
}

TEST(References, ValianRowsAddUp) {
  for (const char* lvl : {"high", "low"}) {
    for (const char* col : {"_trial1", "_trial2", "_trial3", "_trial4", "_all"}) {
      const auto v = [&](const std::string& s) {
        return find_reference(Experiment::morphosyntax, lvl, s + col).value;
      };
      double fp = 0;
      for (int t = 1; t <= 4; ++t) fp += v("errors_type" + std::to_string(t));
      EXPECT_NEAR(fp, v("false_positives"), 0.11) << lvl << col;
      EXPECT_NEAR(v("false_positives") + v("false_negatives"), v("total_errors"), 0.11) << lvl << col;
    }
  }
}

TEST(Compare, RowsAndTests) {
  std::vector<LearnerMetric> ms{{Experiment::morphology, "5R4E", "regularization_rate", 0.75, 135, 180},
                                {Experiment::morphosyntax, "high-S1", "total_errors_all", 12.0, {}, {}}};
  const auto rows = compare_to_human(ms);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].delta, 0.1, 1e-12);
  ASSERT_TRUE(rows[0].test.has_value());
  EXPECT_EQ(rows[0].test->method, "normal_approx");
  EXPECT_EQ(rows[1].condition, "high-S1");
  EXPECT_DOUBLE_EQ(rows[1].human_value, 15.8);
  EXPECT_FALSE(rows[1].test.has_value());
  std::vector<LearnerMetric> bad{{Experiment::syntax, "grammarA", "nothing", 1.0, {}, {}}};
  EXPECT_THROW(compare_to_human(bad), std::out_of_range);
}

}  // namespace
}  // namespace implang::analysis
