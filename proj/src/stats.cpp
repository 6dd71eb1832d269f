/*
 * Copyright 2026 The Intentir Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "intentir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "intentir/error.hpp"

namespace intentir::stats {

namespace special {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

}  // namespace

double ln_gamma(double x) {
  // Lanczos approximation, g = 7, nine coefficients.
  static const double kCoef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection formula keeps the approximation in its accurate range.
    const double pi = 3.14159265358979323846;
    return std::log(pi / std::sin(pi * x)) - ln_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double sum = kCoef[0];
  for (int i = 1; i < 9; ++i) sum += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return 0.91893853320467274178 + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

// Series expansion of P(a, x), effective for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Continued fraction for Q(a, x) via modified Lentz, effective for x >= a + 1.
double gamma_q_contfrac(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return h * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_contfrac(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return h;
}

}  // namespace

double reg_gamma_lower(double a, double x) {
  require(a > 0.0, "reg_gamma_lower: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double reg_gamma_upper(double a, double x) {
  require(a > 0.0, "reg_gamma_upper: a must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double reg_inc_beta(double a, double b, double x) {
  require(a > 0.0 && b > 0.0, "reg_inc_beta: a and b must be positive");
  require(x >= 0.0 && x <= 1.0, "reg_inc_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front =
      ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // The continued fraction converges fastest below the mean of the
  // distribution; use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_contfrac(a, b, x) / a;
  }
  return 1.0 - front * beta_contfrac(b, a, 1.0 - x) / b;
}

double chi_square_sf(double x, double df) {
  require(df > 0.0, "chi_square_sf: df must be positive");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return reg_gamma_upper(df / 2.0, x / 2.0);
}

double student_t_sf_two_sided(double t, double df) {
  require(df > 0.0, "student_t_sf_two_sided: df must be positive");
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
}

double f_sf(double f, double df1, double df2) {
  require(df1 > 0.0 && df2 > 0.0, "f_sf: degrees of freedom must be positive");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return reg_inc_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

}  // namespace special

std::vector<double> midranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the average of ranks i+1..j+1.
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  require(groups.size() >= 2, "kruskal_wallis: need at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    require(!g.empty(), "kruskal_wallis: groups must be non-empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double n_total = static_cast<double>(pooled.size());
  const std::vector<double> ranks = midranks(pooled);

  double h = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
    h += rank_sum * rank_sum / static_cast<double>(g.size());
    offset += g.size();
  }
  h = 12.0 / (n_total * (n_total + 1.0)) * h - 3.0 * (n_total + 1.0);

  // Tie correction over the pooled sample.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  const double correction = 1.0 - tie_sum / (n_total * n_total * n_total - n_total);

  TestResult result;
  result.df1 = static_cast<double>(groups.size()) - 1.0;
  if (correction <= 0.0) {
    // Every pooled value identical: no evidence either way.
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.statistic = h / correction;
  result.p_value = special::chi_square_sf(result.statistic, result.df1);
  return result;
}

std::vector<double> holm_bonferroni(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    require(p >= 0.0 && p <= 1.0, "holm_bonferroni: p-values must lie in [0, 1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m, 0.0);
  double running_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled = static_cast<double>(m - i) * p_values[order[i]];
    running_max = std::max(running_max, std::min(1.0, scaled));
    adjusted[order[i]] = running_max;
  }
  return adjusted;
}

TestResult pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "pearson_correlation: length mismatch");
  const std::size_t n = x.size();
  require(n >= 3, "pearson_correlation: need at least three observations");
  const double nd = static_cast<double>(n);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= nd;
  mean_y /= nd;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  require(sxx > 0.0 && syy > 0.0, "pearson_correlation: zero variance input");
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);

  TestResult result;
  result.statistic = r;
  result.df1 = nd - 2.0;
  if (std::fabs(r) >= 1.0) {
    result.p_value = 0.0;
    return result;
  }
  const double t = r * std::sqrt((nd - 2.0) / (1.0 - r * r));
  result.p_value = special::student_t_sf_two_sided(t, nd - 2.0);
  return result;
}

TestResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  require(groups.size() >= 2, "anova_oneway: need at least two groups");
  std::size_t n_total = 0;
  for (const auto& g : groups) {
    require(!g.empty(), "anova_oneway: groups must be non-empty");
    n_total += g.size();
  }
  const std::size_t k = groups.size();
  require(n_total > k, "anova_oneway: need more observations than groups");

  double grand_sum = 0.0;
  for (const auto& g : groups) grand_sum = std::accumulate(g.begin(), g.end(), grand_sum);
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double v : g) ss_within += (v - mean) * (v - mean);
  }

  TestResult result;
  result.df1 = static_cast<double>(k) - 1.0;
  result.df2 = static_cast<double>(n_total - k);
  if (ss_between <= 0.0) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  if (ss_within <= 0.0) {
    result.statistic = std::numeric_limits<double>::infinity();
    result.p_value = 0.0;
    return result;
  }
  result.statistic = (ss_between / result.df1) / (ss_within / result.df2);
  result.p_value = special::f_sf(result.statistic, result.df1, result.df2);
  return result;
}

double fleiss_kappa(const std::vector<std::vector<int>>& category_counts) {
  require(!category_counts.empty(), "fleiss_kappa: need at least one item");
  const std::size_t n_categories = category_counts.front().size();
  require(n_categories >= 2, "fleiss_kappa: need at least two categories");

  int n_raters = 0;
  for (const auto& row : category_counts) {
    require(row.size() == n_categories, "fleiss_kappa: ragged count matrix");
    int row_sum = 0;
    for (int c : row) {
      require(c >= 0, "fleiss_kappa: negative count");
      row_sum += c;
    }
    if (n_raters == 0) n_raters = row_sum;
    require(row_sum == n_raters, "fleiss_kappa: rows must share one rater count");
  }
  require(n_raters >= 2, "fleiss_kappa: need at least two raters");

  const double n_items = static_cast<double>(category_counts.size());
  const double n = static_cast<double>(n_raters);
  double p_bar = 0.0;
  std::vector<double> category_share(n_categories, 0.0);
  for (const auto& row : category_counts) {
    double sq = 0.0;
    for (std::size_t j = 0; j < n_categories; ++j) {
      sq += static_cast<double>(row[j]) * static_cast<double>(row[j]);
      category_share[j] += static_cast<double>(row[j]);
    }
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= n_items;
  double p_expected = 0.0;
  for (double share : category_share) {
    const double p = share / (n_items * n);
    p_expected += p * p;
  }
  if (p_expected >= 1.0) return 1.0;  // total agreement is the only way here
  return (p_bar - p_expected) / (1.0 - p_expected);
}

double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  require(labels.size() == scores.size(), "roc_auc: length mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (int label : labels) {
    require(label == 0 || label == 1, "roc_auc: labels must be 0 or 1");
    if (label == 1) {
      ++n_pos;
    } else {
      ++n_neg;
    }
  }
  require(n_pos > 0 && n_neg > 0, "roc_auc: need both classes present");
  const std::vector<double> ranks = midranks(scores);
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) positive_rank_sum += ranks[i];
  }
  const double np = static_cast<double>(n_pos);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) /
         (np * static_cast<double>(n_neg));
}

}  // namespace intentir::stats
