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

#ifndef INTENTIR_STATS_HPP_
#define INTENTIR_STATS_HPP_

#include <cstddef>
#include <vector>

namespace intentir::stats {

// Result of a hypothesis test. df2 is zero for single-df-family tests.
struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

// Average ranks (1-based) with ties sharing their midrank.
std::vector<double> midranks(const std::vector<double>& values);

// Kruskal-Wallis H test across k >= 2 non-empty groups. Uses midranks and
// the standard tie correction 1 - sum(t^3 - t) / (N^3 - N). When every value
// is identical the correction hits zero; H is then 0 with p = 1. The p-value
// comes from the chi-square upper tail with k - 1 degrees of freedom.
TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Holm-Bonferroni step-down adjustment. Returns adjusted p-values in input
// order, each clipped to 1 and enforced monotone in the sorted order.
std::vector<double> holm_bonferroni(const std::vector<double>& p_values);

// Pearson r with a two-sided p-value from t = r * sqrt((n-2) / (1-r^2)),
// n - 2 degrees of freedom. Requires n >= 3 and nonzero variance on both
// sides. |r| = 1 maps to p = 0.
TestResult pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

// One-way fixed-effects ANOVA. F = (SSB / (k-1)) / (SSW / (N-k)), p from the
// F upper tail. SSW = 0 with SSB > 0 yields F = inf, p = 0; SSB = 0 yields
// F = 0, p = 1.
TestResult anova_oneway(const std::vector<std::vector<double>>& groups);

// Fleiss' kappa over an items-by-categories count matrix. Every row must sum
// to the same number of annotators n >= 2. Returns 1 when there is no
// disagreement at all (expected agreement 1).
double fleiss_kappa(const std::vector<std::vector<int>>& category_counts);

// Mann-Whitney AUC of scores against binary labels; tied score pairs count
// one half. Requires at least one positive and one negative label.
double roc_auc(const std::vector<int>& labels, const std::vector<double>& scores);

// Special functions backing the p-values above. Accuracy is around 1e-12
// relative over the parameter ranges the tests produce.
namespace special {

double ln_gamma(double x);

// Regularized lower/upper incomplete gamma, P(a, x) and Q(a, x).
double reg_gamma_lower(double a, double x);
double reg_gamma_upper(double a, double x);

// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

double chi_square_sf(double x, double df);
double student_t_sf_two_sided(double t, double df);
double f_sf(double f, double df1, double df2);

}  // namespace special

}  // namespace intentir::stats

#endif  // INTENTIR_STATS_HPP_
