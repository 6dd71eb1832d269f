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

#ifndef INTENTIR_REPORTS_HPP_
#define INTENTIR_REPORTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "intentir/behavior_metrics.hpp"
#include "intentir/ltr.hpp"
#include "intentir/satisfaction.hpp"
#include "intentir/session_log.hpp"
#include "intentir/taxonomy.hpp"

namespace intentir::reports {

// Every report renders identically for identical inputs, byte for byte:
// doubles go through one fixed printf format and JSON objects iterate in
// sorted key order.

enum class Format : int { kCsv = 0, kJson = 1 };

std::string_view format_name(Format format);
Format parse_format(std::string_view text);  // throws ValidationError

// Reproducibility trailer carried by every report: library version, the
// seed, and a digest of the effective configuration.
struct Meta {
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
};

// FNV-1a over the canonical (sorted-key) dump, as 16 hex digits.
std::string config_digest(const nlohmann::json& config);

std::string fmt(double value);                            // printf %.6g
std::string fmt_opt(const std::optional<double>& value);  // "NA" when undefined
std::string_view stars(double p_value);  // "***" / "**" / "*" / ""

void render_distribution(std::ostream& out, const taxonomy::LabelDistribution& dist,
                         Format format, const Meta& meta);

void render_cooccurrence(std::ostream& out, const taxonomy::CooccurrenceMatrix& matrix,
                         Format format, const Meta& meta);

void render_kappa(std::ostream& out, double kappa, std::size_t n_items,
                  std::size_t n_raters, Format format, const Meta& meta);

// One row per (measure, group) mean plus the shared Kruskal-Wallis test and
// Holm-adjusted significance of the measure.
void render_measure_tests(std::ostream& out,
                          const std::vector<std::string>& group_names,
                          const std::vector<metrics::MeasureTestRow>& rows,
                          Format format, const Meta& meta);

void render_correlations(std::ostream& out,
                         const std::vector<metrics::CorrelationRow>& rows,
                         Format format, const Meta& meta);

void render_click_reasons(std::ostream& out, const metrics::ClickReasonReport& report,
                          Format format, const Meta& meta);

// Cross-validated classification results, one block per named setting.
void render_sat_results(
    std::ostream& out,
    const std::vector<std::pair<std::string, sat::ExperimentResult>>& results,
    Format format, const Meta& meta);

// Cross-validated ranking results, one block per named setting.
void render_cv_results(
    std::ostream& out, const std::vector<std::pair<std::string, ltr::CvResult>>& results,
    Format format, const Meta& meta);

// Per-document scores plus the pooled ranking metrics of one scoring run.
void render_ranking_scores(std::ostream& out,
                           const std::vector<ltr::RankingInstance>& instances,
                           const std::vector<double>& scores, Format format,
                           const Meta& meta);

void render_split_summary(std::ostream& out, const logs::SplitReport& report,
                          std::size_t sessions_kept, Format format, const Meta& meta);

void render_synth_summary(std::ostream& out, std::size_t n_sessions,
                          std::size_t n_events, Format format, const Meta& meta);

}  // namespace intentir::reports

#endif  // INTENTIR_REPORTS_HPP_
