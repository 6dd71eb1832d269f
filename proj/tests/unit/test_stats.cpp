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

#include <cmath>
#include <vector>

#include <doctest.h>

#include "intentir/error.hpp"
#include "intentir/stats.hpp"

using namespace intentir;

TEST_SUITE_BEGIN("stats");

TEST_CASE("midranks average tied positions") {
  const std::vector<double> values = {3.0, 1.0, 4.0, 1.0, 5.0};
  const std::vector<double> ranks = stats::midranks(values);
  const std::vector<double> expected = {3.0, 1.5, 4.0, 1.5, 5.0};
  REQUIRE(ranks.size() == expected.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    CHECK(ranks[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("kruskal-wallis on three separated groups") {
  // Ranks 1..9 split into thirds give H = 7.2; chi-square df 2 makes the
  // tail exp(-H/2).
  const std::vector<std::vector<double>> groups = {
      {1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}};
  const stats::TestResult r = stats::kruskal_wallis(groups);
  CHECK(r.statistic == doctest::Approx(7.2).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(std::exp(-3.6)).epsilon(1e-12));
  CHECK(r.df1 == doctest::Approx(2.0));
}

TEST_CASE("kruskal-wallis tie correction") {
  // Values {1,1,2} vs {1,2,2}: H_uncorrected = 3/7, correction 27/35,
  // so H = 5/9. With two groups df = 1 and the survival function has the
  // closed form erfc(sqrt(H/2)).
  const std::vector<std::vector<double>> groups = {{1.0, 1.0, 2.0}, {1.0, 2.0, 2.0}};
  const stats::TestResult r = stats::kruskal_wallis(groups);
  CHECK(r.statistic == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(r.df1 == doctest::Approx(1.0));
  CHECK(r.p_value == doctest::Approx(std::erfc(std::sqrt(5.0 / 18.0))).epsilon(1e-10));
}

TEST_CASE("kruskal-wallis degenerates to H=0 when all values tie") {
  const std::vector<std::vector<double>> groups = {{2.0, 2.0}, {2.0, 2.0, 2.0}};
  const stats::TestResult r = stats::kruskal_wallis(groups);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("kruskal-wallis input validation") {
  CHECK_THROWS_AS(stats::kruskal_wallis({{1.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(stats::kruskal_wallis({{1.0}, {}}), ValidationError);
}

TEST_CASE("holm adjustment is step-down, monotone and order preserving") {
  {
    const std::vector<double> adjusted = stats::holm_bonferroni({0.01, 0.02, 0.04});
    CHECK(adjusted[0] == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(adjusted[1] == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(adjusted[2] == doctest::Approx(0.04).epsilon(1e-12));
  }
  {
    // Same p-values permuted; the mapping follows the input positions.
    const std::vector<double> adjusted = stats::holm_bonferroni({0.04, 0.01, 0.02});
    CHECK(adjusted[0] == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(adjusted[1] == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(adjusted[2] == doctest::Approx(0.04).epsilon(1e-12));
  }
  {
    const std::vector<double> adjusted = stats::holm_bonferroni({0.5, 0.6});
    CHECK(adjusted[0] == doctest::Approx(1.0));
    CHECK(adjusted[1] == doctest::Approx(1.0));
  }
  CHECK(stats::holm_bonferroni({}).empty());
}

TEST_CASE("pearson correlation with exact closed-form p") {
  // r = 0.8 at n = 4; with df = 2 the two-sided tail is 1 - t/sqrt(t^2+2),
  // which collapses to exactly 0.2 here.
  const stats::TestResult r =
      stats::pearson_correlation({1.0, 2.0, 3.0, 4.0}, {1.0, 3.0, 2.0, 4.0});
  CHECK(r.statistic == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.df1 == doctest::Approx(2.0));
}

TEST_CASE("pearson handles perfect correlation") {
  const stats::TestResult r =
      stats::pearson_correlation({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0});
  CHECK(r.statistic == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.0));
}

TEST_CASE("pearson input validation") {
  CHECK_THROWS_AS(stats::pearson_correlation({1.0, 2.0}, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(stats::pearson_correlation({1.0, 2.0, 3.0}, {1.0, 2.0}),
                  ValidationError);
  CHECK_THROWS_AS(stats::pearson_correlation({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}),
                  ValidationError);
}

TEST_CASE("anova on two two-point groups") {
  // Group means 1.5 and 5.5, SSB = 16, SSW = 1: F = 16 / (1/2) = 32 with
  // df (1, 2). P(F(1,2) > 32) = 1 - sqrt(32/34).
  const stats::TestResult r = stats::anova_oneway({{1.0, 2.0}, {5.0, 6.0}});
  CHECK(r.statistic == doctest::Approx(32.0).epsilon(1e-12));
  CHECK(r.df1 == doctest::Approx(1.0));
  CHECK(r.df2 == doctest::Approx(2.0));
  CHECK(r.p_value ==
        doctest::Approx(1.0 - std::sqrt(32.0 / 34.0)).epsilon(1e-12));
}

TEST_CASE("anova degenerate cases") {
  {
    const stats::TestResult r = stats::anova_oneway({{1.0, 2.0}, {1.0, 2.0}});
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
  }
  {
    const stats::TestResult r = stats::anova_oneway({{1.0, 1.0}, {2.0, 2.0}});
    CHECK(std::isinf(r.statistic));
    CHECK(r.p_value == 0.0);
  }
}

TEST_CASE("fleiss kappa hand values") {
  // One item, votes split 2-1 over two categories: observed agreement 1/3,
  // expected 5/9, kappa = -1/2.
  CHECK(stats::fleiss_kappa({{2, 1}}) == doctest::Approx(-0.5).epsilon(1e-12));
  // Clean two-item agreement across distinct categories.
  CHECK(stats::fleiss_kappa({{3, 0}, {0, 3}}) == doctest::Approx(1.0).epsilon(1e-12));
  // Unanimous single category: expected agreement is 1, returned as 1.
  CHECK(stats::fleiss_kappa({{3, 0}, {3, 0}}) == doctest::Approx(1.0));
}

TEST_CASE("fleiss kappa input validation") {
  CHECK_THROWS_AS(stats::fleiss_kappa({}), ValidationError);
  CHECK_THROWS_AS(stats::fleiss_kappa({{2, 1}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(stats::fleiss_kappa({{1, 0}}), ValidationError);
}

TEST_CASE("roc auc by pair counting") {
  CHECK(stats::roc_auc({1, 0, 1, 0}, {0.9, 0.8, 0.7, 0.1}) ==
        doctest::Approx(0.75).epsilon(1e-12));
  CHECK(stats::roc_auc({1, 0}, {0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stats::roc_auc({0, 1}, {0.1, 0.9}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(stats::roc_auc({1, 1}, {0.1, 0.9}), ValidationError);
  CHECK_THROWS_AS(stats::roc_auc({1, 0}, {0.1}), ValidationError);
}

TEST_CASE("special function spot values") {
  CHECK(stats::special::ln_gamma(0.5) ==
        doctest::Approx(0.5 * std::log(std::acos(-1.0))).epsilon(1e-12));
  CHECK(stats::special::ln_gamma(5.0) ==
        doctest::Approx(std::log(24.0)).epsilon(1e-12));
  CHECK(stats::special::reg_gamma_lower(1.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(stats::special::reg_gamma_upper(1.0, 2.5) ==
        doctest::Approx(std::exp(-2.5)).epsilon(1e-12));
  CHECK(stats::special::reg_inc_beta(2.0, 2.0, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // I_x(1, b) = 1 - (1-x)^b.
  CHECK(stats::special::reg_inc_beta(1.0, 3.0, 0.25) ==
        doctest::Approx(1.0 - std::pow(0.75, 3.0)).epsilon(1e-12));
  CHECK(stats::special::chi_square_sf(3.21, 2.0) ==
        doctest::Approx(std::exp(-3.21 / 2.0)).epsilon(1e-12));
  CHECK(stats::special::chi_square_sf(1.0, 1.0) ==
        doctest::Approx(std::erfc(std::sqrt(0.5))).epsilon(1e-12));
  // Student t with df 1 is Cauchy: two-sided tail of t = 1 is exactly 1/2.
  CHECK(stats::special::student_t_sf_two_sided(1.0, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stats::special::student_t_sf_two_sided(0.0, 7.0) == doctest::Approx(1.0));
}

TEST_SUITE_END();
