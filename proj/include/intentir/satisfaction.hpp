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

#ifndef INTENTIR_SATISFACTION_HPP_
#define INTENTIR_SATISFACTION_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intentir/boosting.hpp"
#include "intentir/session_log.hpp"
#include "intentir/taxonomy.hpp"

namespace intentir::sat {

enum class FeatureGroup : int { kClick = 0, kHover = 1, kDwell = 2, kQuery = 3 };

inline constexpr std::array<FeatureGroup, 4> kAllFeatureGroups = {
    FeatureGroup::kClick, FeatureGroup::kHover, FeatureGroup::kDwell,
    FeatureGroup::kQuery};

std::string_view group_name(FeatureGroup group);
FeatureGroup parse_group(std::string_view text);  // throws ValidationError

// Twenty behavior features in four groups, then one missing-data indicator
// per group that can lack data. Undefined features are imputed as 0 with the
// matching indicator set to 1.
inline constexpr std::size_t kBaseFeatureCount = 20;
inline constexpr std::size_t kFeatureCount = 23;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    // click group
    "n_clicks", "clicked", "max_rr", "min_rr", "mean_rr",
    // hover group
    "n_hovers", "p_click_given_hover", "avg_skipped_between_hovers",
    "max_hover_rank", "min_hover_rank", "mean_hover_rank",
    // dwell group
    "serp_dwell", "landing_dwell", "time_to_first_click", "avg_hover_dwell",
    "avg_click_dwell",
    // query group
    "query_char_length", "query_term_count", "unique_term_ratio", "pages_visited",
    // indicators
    "click_missing", "hover_missing", "dwell_missing"};

// Group owning each of the 23 columns (indicators belong to their group).
FeatureGroup feature_group(std::size_t index);

struct SatInstance {
  std::string session_id;
  std::string query_id;
  std::array<double, kFeatureCount> features{};
  std::optional<taxonomy::Intent> intent;
  int graded = 0;  // 1..5 as reported
  int label = 0;   // binarized
};

// Ratings 1..3 count as dissatisfied (0), 4..5 as satisfied (1).
int binarize_satisfaction(int graded);

std::array<double, kFeatureCount> extract_features(
    const logs::QueryUnit& unit, const text::TokenizerOptions& tokenizer = {});

// One instance per rated query unit. The instance intent is the session's
// label when that label is a single intent.
std::vector<SatInstance> make_instances(const std::vector<logs::Session>& sessions,
                                        const text::TokenizerOptions& tokenizer = {});

enum class Mode : int { kIntentAgnostic = 0, kIntentAware = 1 };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view text);

struct ExperimentConfig {
  Mode mode = Mode::kIntentAgnostic;
  std::vector<FeatureGroup> groups = {FeatureGroup::kClick, FeatureGroup::kHover,
                                      FeatureGroup::kDwell, FeatureGroup::kQuery};
  int n_folds = 5;
  std::uint64_t seed = 0;
  boosting::BoostParams boost;
};

struct FoldResult {
  double auc = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

struct ExperimentResult {
  std::vector<FoldResult> folds;
  double mean_auc = 0.0;
};

// Fold assignment per instance: whole sessions stay together, sessions are
// stratified by their majority label, and the shuffle is seeded.
std::vector<int> session_folds(const std::vector<SatInstance>& instances, int n_folds,
                               std::uint64_t seed);

// Cross-validated binary classification with the shared boosted trees.
// Intent-aware mode appends a one-hot intent block and requires an intent on
// every instance. Every test fold must contain both classes.
ExperimentResult run_experiment(const std::vector<SatInstance>& instances,
                                const ExperimentConfig& config);

std::vector<SatInstance> read_instances_jsonl(std::istream& in);
void write_instances_jsonl(std::ostream& out, const std::vector<SatInstance>& instances);

}  // namespace intentir::sat

#endif  // INTENTIR_SATISFACTION_HPP_
