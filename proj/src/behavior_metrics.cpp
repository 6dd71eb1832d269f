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

#include "intentir/behavior_metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "intentir/error.hpp"

namespace intentir::metrics {

std::optional<double> MeasureVector::get(std::string_view name) const {
  for (const auto& [key, value] : values) {
    if (key == name) return value;
  }
  throw ValidationError("unknown measure: " + std::string(name));
}

namespace {

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

MeasureVector session_measures(const logs::Session& session,
                               double satisfied_dwell_seconds) {
  require(!session.queries.empty(), "session_measures: session has no queries");
  require(satisfied_dwell_seconds >= 0.0, "session_measures: negative dwell threshold");

  const double n_queries = static_cast<double>(session.queries.size());
  double n_pages = 0.0;
  std::vector<double> click_ranks, click_dwells, hover_ranks, hover_times;
  std::size_t satisfied_clicks = 0;
  std::size_t clicked_hovers = 0;
  std::size_t n_hovers = 0;
  double serp_time = 0.0;

  for (const logs::QueryUnit& unit : session.queries) {
    n_pages += static_cast<double>(unit.pages_viewed);
    serp_time += unit.serp_time_seconds;
    std::set<int> clicked_ranks_in_unit;
    for (const logs::Click& click : unit.clicks) {
      click_ranks.push_back(static_cast<double>(click.rank));
      click_dwells.push_back(click.dwell_seconds);
      if (click.dwell_seconds >= satisfied_dwell_seconds) ++satisfied_clicks;
      clicked_ranks_in_unit.insert(click.rank);
    }
    for (const logs::Hover& hover : unit.hovers) {
      ++n_hovers;
      hover_ranks.push_back(static_cast<double>(hover.rank));
      hover_times.push_back(hover.duration_seconds());
      if (clicked_ranks_in_unit.count(hover.rank) > 0) ++clicked_hovers;
    }
  }

  const double task_time = session.task_time_seconds();
  MeasureVector out;
  const auto set = [&](std::string_view name, std::optional<double> value) {
    out.values.emplace_back(std::string(name), value);
  };
  const bool has_clicks = !click_ranks.empty();
  const bool has_hovers = !hover_ranks.empty();

  set("queries_per_session", n_queries);
  set("pages_per_session", n_pages);
  set("search_depth", n_pages / n_queries);
  set("clicks_per_session", static_cast<double>(click_ranks.size()));
  set("min_click_rank", has_clicks
                            ? std::optional<double>(*std::min_element(
                                  click_ranks.begin(), click_ranks.end()))
                            : std::nullopt);
  set("avg_click_rank",
      has_clicks ? std::optional<double>(mean_of(click_ranks)) : std::nullopt);
  set("pct_satisfied_clicks",
      has_clicks ? std::optional<double>(static_cast<double>(satisfied_clicks) /
                                         static_cast<double>(click_ranks.size()))
                 : std::nullopt);
  set("hovers_per_session", static_cast<double>(n_hovers));
  set("min_hover_rank", has_hovers
                            ? std::optional<double>(*std::min_element(
                                  hover_ranks.begin(), hover_ranks.end()))
                            : std::nullopt);
  set("avg_hover_rank",
      has_hovers ? std::optional<double>(mean_of(hover_ranks)) : std::nullopt);
  set("avg_hover_time",
      has_hovers ? std::optional<double>(mean_of(hover_times)) : std::nullopt);
  set("p_click_given_hover",
      has_hovers ? std::optional<double>(static_cast<double>(clicked_hovers) /
                                         static_cast<double>(n_hovers))
                 : std::nullopt);
  set("task_time", task_time);
  set("pct_serp_time", task_time > 0.0
                           ? std::optional<double>(std::min(1.0, serp_time / task_time))
                           : std::nullopt);
  set("avg_click_dwell",
      has_clicks ? std::optional<double>(mean_of(click_dwells)) : std::nullopt);
  return out;
}

MeasureVector online_metrics(const logs::QueryUnit& unit) {
  MeasureVector out;
  const auto set = [&](std::string_view name, std::optional<double> value) {
    out.values.emplace_back(std::string(name), value);
  };

  const bool has_clicks = !unit.clicks.empty();
  double max_rr = 0.0, min_rr = 0.0, mean_rr = 0.0;
  double sum_dwell = 0.0;
  std::int64_t first_click = 0, last_click = 0;
  if (has_clicks) {
    int min_rank = unit.clicks.front().rank;
    int max_rank = unit.clicks.front().rank;
    first_click = last_click = unit.clicks.front().timestamp;
    for (const logs::Click& click : unit.clicks) {
      min_rank = std::min(min_rank, click.rank);
      max_rank = std::max(max_rank, click.rank);
      mean_rr += 1.0 / static_cast<double>(click.rank);
      sum_dwell += click.dwell_seconds;
      first_click = std::min(first_click, click.timestamp);
      last_click = std::max(last_click, click.timestamp);
    }
    max_rr = 1.0 / static_cast<double>(min_rank);
    min_rr = 1.0 / static_cast<double>(max_rank);
    mean_rr /= static_cast<double>(unit.clicks.size());
  }

  set("uctr", has_clicks ? 1.0 : 0.0);
  set("qctr", static_cast<double>(unit.clicks.size()));
  set("max_rr", max_rr);
  set("min_rr", min_rr);
  set("mean_rr", mean_rr);
  set("sum_click_dwell", has_clicks ? std::optional<double>(sum_dwell) : std::nullopt);
  set("avg_click_dwell",
      has_clicks
          ? std::optional<double>(sum_dwell / static_cast<double>(unit.clicks.size()))
          : std::nullopt);
  set("query_dwell", unit.duration_seconds());
  set("time_to_first_click",
      has_clicks ? std::optional<double>(
                       static_cast<double>(first_click - unit.start_timestamp) / 1000.0)
                 : std::nullopt);
  set("time_to_last_click",
      has_clicks ? std::optional<double>(
                       static_cast<double>(last_click - unit.start_timestamp) / 1000.0)
                 : std::nullopt);
  return out;
}

std::vector<MeasureTestRow> compare_measures(
    const std::vector<std::pair<std::string, std::vector<MeasureVector>>>& groups) {
  require(groups.size() >= 2, "compare_measures: need at least two groups");
  for (const auto& [name, vectors] : groups) {
    require(!vectors.empty(), "compare_measures: group " + name + " is empty");
  }

  // The first vector fixes the measure registry; all groups must match it.
  const std::vector<std::pair<std::string, std::optional<double>>>& registry =
      groups.front().second.front().values;
  std::vector<MeasureTestRow> rows;
  std::vector<std::size_t> tested_rows;

  for (const auto& [measure, unused] : registry) {
    (void)unused;
    MeasureTestRow row;
    row.measure = measure;
    std::vector<std::vector<double>> samples;
    bool complete = true;
    for (const auto& [name, vectors] : groups) {
      (void)name;
      std::vector<double> sample;
      for (const MeasureVector& mv : vectors) {
        if (const auto value = mv.get(measure)) sample.push_back(*value);
      }
      row.group_sizes.push_back(sample.size());
      row.group_means.push_back(
          sample.empty() ? std::nullopt : std::optional<double>(mean_of(sample)));
      if (sample.empty()) complete = false;
      samples.push_back(std::move(sample));
    }
    if (complete) {
      row.test = stats::kruskal_wallis(samples);
      row.tested = true;
      tested_rows.push_back(rows.size());
    }
    rows.push_back(std::move(row));
  }

  std::vector<double> p_values;
  p_values.reserve(tested_rows.size());
  for (std::size_t index : tested_rows) p_values.push_back(rows[index].test.p_value);
  const std::vector<double> adjusted = stats::holm_bonferroni(p_values);
  for (std::size_t i = 0; i < tested_rows.size(); ++i) {
    rows[tested_rows[i]].p_adjusted = adjusted[i];
  }
  return rows;
}

std::vector<CorrelationRow> correlate_with_satisfaction(
    const std::vector<logs::Session>& sessions) {
  std::vector<std::pair<MeasureVector, double>> rated;
  for (const logs::Session& session : sessions) {
    for (const logs::QueryUnit& unit : session.queries) {
      if (unit.satisfaction) {
        rated.emplace_back(online_metrics(unit), static_cast<double>(*unit.satisfaction));
      }
    }
  }
  require(!rated.empty(), "correlate_with_satisfaction: no rated queries");

  std::vector<CorrelationRow> rows;
  for (std::string_view metric : kOnlineMetricNames) {
    CorrelationRow row;
    row.metric = std::string(metric);
    std::vector<double> xs, ys;
    for (const auto& [mv, satisfaction] : rated) {
      if (const auto value = mv.get(metric)) {
        xs.push_back(*value);
        ys.push_back(satisfaction);
      }
    }
    row.n_pairs = xs.size();
    if (xs.size() >= 3) {
      try {
        row.pearson = stats::pearson_correlation(xs, ys);
        row.tested = true;
      } catch (const ValidationError&) {
        row.tested = false;  // constant metric or constant satisfaction
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ClickReasonReport click_reason_report(const std::vector<logs::Session>& sessions) {
  // user -> intent -> reasons ticked at least once
  std::map<std::string, std::map<std::size_t, std::set<std::size_t>>> selections;
  for (const logs::Session& session : sessions) {
    if (!session.intent) continue;
    const auto intent = taxonomy::as_intent(session.intent->value);
    if (!intent) continue;
    const auto intent_index = static_cast<std::size_t>(*intent);
    auto& per_intent = selections[session.user_id];
    auto& reasons = per_intent[intent_index];  // creates the (user, intent) cell
    for (const logs::QueryUnit& unit : session.queries) {
      for (logs::ClickReason reason : unit.click_reasons) {
        reasons.insert(static_cast<std::size_t>(reason));
      }
    }
  }
  require(!selections.empty(), "click_reason_report: no single-intent sessions");

  ClickReasonReport report;
  // indicators[intent][reason] -> one 0/1 observation per active user
  std::array<std::array<std::vector<double>, 8>, 5> indicators;
  for (const auto& [user, per_intent] : selections) {
    (void)user;
    for (const auto& [intent_index, reasons] : per_intent) {
      ++report.n_users[intent_index];
      for (std::size_t r = 0; r < 8; ++r) {
        indicators[intent_index][r].push_back(reasons.count(r) > 0 ? 1.0 : 0.0);
      }
    }
  }
  for (std::size_t i = 0; i < 5; ++i) {
    if (report.n_users[i] == 0) continue;
    for (std::size_t r = 0; r < 8; ++r) {
      report.share[i][r] = mean_of(indicators[i][r]);
    }
  }
  for (std::size_t r = 0; r < 8; ++r) {
    std::vector<std::vector<double>> groups;
    for (std::size_t i = 0; i < 5; ++i) {
      if (!indicators[i][r].empty()) groups.push_back(indicators[i][r]);
    }
    if (groups.size() < 2) continue;
    try {
      report.anova[r] = stats::anova_oneway(groups);
      report.tested[r] = true;
    } catch (const ValidationError&) {
      report.tested[r] = false;  // for example, a single observation per group
    }
  }
  return report;
}

}  // namespace intentir::metrics
