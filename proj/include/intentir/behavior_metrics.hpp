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

#ifndef INTENTIR_BEHAVIOR_METRICS_HPP_
#define INTENTIR_BEHAVIOR_METRICS_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "intentir/session_log.hpp"
#include "intentir/stats.hpp"
#include "intentir/taxonomy.hpp"

namespace intentir::metrics {

// A click counts as satisfied when the user stayed on the result at least
// this long.
inline constexpr double kSatisfiedDwellSeconds = 30.0;

// Named measure values in a fixed registry order. Measures whose denominator
// is empty (say, click ranks without clicks) are explicitly undefined rather
// than zero.
struct MeasureVector {
  std::vector<std::pair<std::string, std::optional<double>>> values;

  // Nullopt means the measure is undefined for this session. Unknown names
  // throw ValidationError.
  std::optional<double> get(std::string_view name) const;
};

inline constexpr std::array<std::string_view, 15> kSessionMeasureNames = {
    "queries_per_session", "pages_per_session",  "search_depth",
    "clicks_per_session",  "min_click_rank",     "avg_click_rank",
    "pct_satisfied_clicks", "hovers_per_session", "min_hover_rank",
    "avg_hover_rank",      "avg_hover_time",     "p_click_given_hover",
    "task_time",           "pct_serp_time",      "avg_click_dwell"};

inline constexpr std::array<std::string_view, 10> kOnlineMetricNames = {
    "uctr",           "qctr",           "max_rr",
    "min_rr",         "mean_rr",        "sum_click_dwell",
    "avg_click_dwell", "query_dwell",   "time_to_first_click",
    "time_to_last_click"};

// Per-session behavior profile: counts, rank statistics, hover statistics
// and timing aggregated over the session's query units.
MeasureVector session_measures(const logs::Session& session,
                               double satisfied_dwell_seconds = kSatisfiedDwellSeconds);

// Per-query engagement metrics. A unit without clicks has zero click-through
// and reciprocal ranks but undefined click timing and dwell statistics.
MeasureVector online_metrics(const logs::QueryUnit& unit);

// One measure compared across groups with a Kruskal-Wallis test. Measures
// lacking data in some group are reported untested. p_adjusted applies the
// Holm correction across every tested measure of the call.
struct MeasureTestRow {
  std::string measure;
  std::vector<std::optional<double>> group_means;
  std::vector<std::size_t> group_sizes;
  stats::TestResult test;
  double p_adjusted = 1.0;
  bool tested = false;
};

std::vector<MeasureTestRow> compare_measures(
    const std::vector<std::pair<std::string, std::vector<MeasureVector>>>& groups);

// Pearson correlation of each online metric against graded satisfaction,
// pairwise-excluding queries where the metric is undefined. Metrics with
// fewer than three pairs or constant values stay untested.
struct CorrelationRow {
  std::string metric;
  std::size_t n_pairs = 0;
  stats::TestResult pearson;
  bool tested = false;
};

std::vector<CorrelationRow> correlate_with_satisfaction(
    const std::vector<logs::Session>& sessions);

// Click reason adoption per intent. share[intent][reason] is the fraction of
// that intent's users who ticked the reason at least once; the per-reason
// ANOVA compares those user-level indicators across intents. Sessions whose
// label is not a single intent are ignored.
struct ClickReasonReport {
  std::array<std::array<double, 8>, 5> share{};
  std::array<std::size_t, 5> n_users{};
  std::array<stats::TestResult, 8> anova{};
  std::array<bool, 8> tested{};
};

ClickReasonReport click_reason_report(const std::vector<logs::Session>& sessions);

}  // namespace intentir::metrics

#endif  // INTENTIR_BEHAVIOR_METRICS_HPP_
