#include "implang/analysis/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace implang::analysis {

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_counts(int k, int n) {
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  if (k < 0 || k > n) throw std::invalid_argument("successes must be within [0, n]");
}

void check_matrix(const BlockMatrix& runs) {
  if (runs.size() < 2) throw std::domain_error("need at least 2 runs");
  const auto b = runs.front().size();
  if (b < 2) throw std::domain_error("need at least 2 blocks");
  for (const auto& r : runs)
    if (r.size() != b) throw std::domain_error("runs have different block counts");
}

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct Fit {
  double rss;
  int k;
};

double bf_from(const BlockMatrix& runs, const Fit& alt) {
  const auto n_blocks = runs.front().size();
  const double n = static_cast<double>(runs.size() * n_blocks);
  double grand = 0;
  for (const auto& r : runs) grand += std::accumulate(r.begin(), r.end(), 0.0);
  grand /= n;
  double rss0 = 0;
  for (const auto& r : runs)
    for (double y : r) rss0 += (y - grand) * (y - grand);
  constexpr double eps = 1e-12;
  if (rss0 <= eps && alt.rss <= eps) return 1.0;
  if (alt.rss <= eps) throw std::domain_error("singular design: alternative fits exactly");
  const double bic0 = n * std::log(rss0 / n) + 1.0 * std::log(n);
  const double bic1 = n * std::log(alt.rss / n) + alt.k * std::log(n);
  return std::exp((bic0 - bic1) / 2.0);
}

std::vector<double> block_means(const BlockMatrix& runs) {
  std::vector<double> m(runs.front().size(), 0.0);
  for (const auto& r : runs)
    for (std::size_t j = 0; j < r.size(); ++j) m[j] += r[j];
  for (auto& v : m) v /= static_cast<double>(runs.size());
  return m;
}

double rss_against(const BlockMatrix& runs, const std::vector<double>& fitted) {
  double rss = 0;
  for (const auto& r : runs)
    for (std::size_t j = 0; j < r.size(); ++j) rss += (r[j] - fitted[j]) * (r[j] - fitted[j]);
  return rss;
}

double trend_statistic(const BlockMatrix& runs, std::span<const double> index) {
  double s = 0;
  for (const auto& r : runs) s += spearman_rho(index, r);
  return s / static_cast<double>(runs.size());
}

}  // namespace

double fisher_exact_two_sided(int k1, int n1, int k2, int n2) {
  check_counts(k1, n1);
  check_counts(k2, n2);
  const int total = n1 + n2, successes = k1 + k2;
  const int lo = std::max(0, successes - n2), hi = std::min(n1, successes);
  const double denom = log_choose(total, successes);
  auto logp = [&](int a) { return log_choose(n1, a) + log_choose(n2, successes - a) - denom; };
  const double observed = logp(k1);
  double p = 0;
  for (int a = lo; a <= hi; ++a) {
    const double lp = logp(a);
    if (lp <= observed + 1e-7) p += std::exp(lp);  // relative tolerance for float ties
  }
  return std::min(1.0, p);
}

StatResult two_proportion_test(int k1, int n1, int k2, int n2) {
  check_counts(k1, n1);
  check_counts(k2, n2);
  StatResult r;
  r.name = "two_proportion";
  r.n = {n1, n2};
  const double p1 = static_cast<double>(k1) / n1, p2 = static_cast<double>(k2) / n2;
  r.statistic = p1 - p2;
  if (std::min(n1, n2) < kExactThreshold) {
    r.method = "fisher_exact";
    r.p_value = fisher_exact_two_sided(k1, n1, k2, n2);
    return r;
  }
  r.method = "normal_approx";
  const double pooled = static_cast<double>(k1 + k2) / (n1 + n2);
  const double se = std::sqrt(pooled * (1 - pooled) * (1.0 / n1 + 1.0 / n2));
  if (se == 0) {
    r.p_value = 1.0;
    return r;
  }
  const double z = (p1 - p2) / se;
  r.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  return r;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("vectors differ in length");
  const double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw std::domain_error("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

StatResult pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("need two vectors of equal length >= 3");
  StatResult res;
  res.name = "pearson";
  res.method = "t_test";
  res.n = {static_cast<int>(x.size())};
  const double r = pearson_r(x, y);
  res.statistic = r;
  const double df = static_cast<double>(x.size()) - 2;
  if (std::abs(r) >= 1.0) {
    res.p_value = 0.0;
    return res;
  }
  const double t = r * std::sqrt(df / (1 - r * r));
  boost::math::students_t dist(df);
  res.p_value = 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return res;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  try {
    return pearson_r(rx, ry);
  } catch (const std::domain_error&) {
    return 0.0;
  }
}

StatResult permutation_trend_test(const BlockMatrix& runs, int n_perm, Rng& rng) {
  check_matrix(runs);
  if (n_perm < 1) throw std::invalid_argument("n_perm must be >= 1");
  std::vector<double> index(runs.front().size());
  std::iota(index.begin(), index.end(), 1.0);
  const double observed = trend_statistic(runs, index);
  BlockMatrix work = runs;
  int b = 0;
  for (int i = 0; i < n_perm; ++i) {
    for (auto& r : work) shuffle_in_place(r, rng);
    if (trend_statistic(work, index) >= observed - 1e-12) ++b;
  }
  StatResult res;
  res.name = "trend";
  res.method = "permutation_mean_spearman";
  res.statistic = observed;
  res.p_value = (b + 1.0) / (n_perm + 1.0);
  res.n = {static_cast<int>(runs.size()), static_cast<int>(index.size()), n_perm};
  return res;
}

StatResult bf_bic_block_effect(const BlockMatrix& runs) {
  check_matrix(runs);
  const auto means = block_means(runs);
  StatResult res;
  res.name = "block_effect";
  res.method = "bic_bayes_factor";
  res.bayes_factor = bf_from(runs, {rss_against(runs, means), static_cast<int>(means.size())});
  res.statistic = std::log(*res.bayes_factor);
  res.n = {static_cast<int>(runs.size()), static_cast<int>(means.size())};
  return res;
}

std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights) {
  struct Pool {
    double sum, weight;
    std::size_t count;
  };
  std::vector<Pool> pools;
  for (std::size_t i = 0; i < values.size(); ++i) {
    pools.push_back({values[i] * weights[i], weights[i], 1});
    while (pools.size() > 1) {
      auto& last = pools.back();
      auto& prev = pools[pools.size() - 2];
      if (prev.sum / prev.weight <= last.sum / last.weight) break;
      prev = {prev.sum + last.sum, prev.weight + last.weight, prev.count + last.count};
      pools.pop_back();
    }
  }
  std::vector<double> out;
  for (const auto& p : pools) out.insert(out.end(), p.count, p.sum / p.weight);
  return out;
}

StatResult bf_bic_learning_direction(const BlockMatrix& runs) {
  check_matrix(runs);
  const auto means = block_means(runs);
  const std::vector<double> w(means.size(), static_cast<double>(runs.size()));
  const auto fitted = isotonic_fit(means, w);
  StatResult res;
  res.name = "learning_direction";
  res.method = "bic_bayes_factor_isotonic";
  res.bayes_factor = bf_from(runs, {rss_against(runs, fitted), static_cast<int>(means.size())});
  res.statistic = std::log(*res.bayes_factor);
  res.n = {static_cast<int>(runs.size()), static_cast<int>(means.size())};
  return res;
}

}  // namespace implang::analysis
