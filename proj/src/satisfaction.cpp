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

#include "intentir/satisfaction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "intentir/error.hpp"
#include "intentir/jsonl.hpp"
#include "intentir/rng.hpp"
#include "intentir/stats.hpp"

namespace intentir::sat {

namespace {

constexpr std::array<std::string_view, 4> kGroupNames = {"click", "hover", "dwell",
                                                         "query"};

// Feature index layout; keep in sync with kFeatureNames.
constexpr std::size_t kClickBegin = 0, kClickEnd = 5;
constexpr std::size_t kHoverBegin = 5, kHoverEnd = 11;
constexpr std::size_t kDwellBegin = 11, kDwellEnd = 16;
constexpr std::size_t kQueryBegin = 16, kQueryEnd = 20;
constexpr std::size_t kClickMissing = 20, kHoverMissing = 21, kDwellMissing = 22;

std::size_t codepoint_count(std::string_view text) {
  std::size_t count = 0;
  for (unsigned char byte : text) {
    if ((byte & 0xC0) != 0x80) ++count;  // skip UTF-8 continuation bytes
  }
  return count;
}

}  // namespace

std::string_view group_name(FeatureGroup group) {
  return kGroupNames[static_cast<std::size_t>(group)];
}

FeatureGroup parse_group(std::string_view text) {
  for (std::size_t i = 0; i < kGroupNames.size(); ++i) {
    if (kGroupNames[i] == text) return static_cast<FeatureGroup>(i);
  }
  throw ValidationError("unknown feature group: " + std::string(text));
}

FeatureGroup feature_group(std::size_t index) {
  require(index < kFeatureCount, "feature index out of range");
  if (index < kClickEnd || index == kClickMissing) return FeatureGroup::kClick;
  if (index < kHoverEnd || index == kHoverMissing) return FeatureGroup::kHover;
  if (index < kDwellEnd || index == kDwellMissing) return FeatureGroup::kDwell;
  return FeatureGroup::kQuery;
}

int binarize_satisfaction(int graded) {
  require(graded >= 1 && graded <= 5, "satisfaction must lie in 1..5");
  return graded >= 4 ? 1 : 0;
}

std::array<double, kFeatureCount> extract_features(
    const logs::QueryUnit& unit, const text::TokenizerOptions& tokenizer) {
  std::array<double, kFeatureCount> f{};

  const bool has_clicks = !unit.clicks.empty();
  const bool has_hovers = !unit.hovers.empty();

  // Click group.
  f[0] = static_cast<double>(unit.clicks.size());
  f[1] = has_clicks ? 1.0 : 0.0;
  if (has_clicks) {
    int min_rank = unit.clicks.front().rank;
    int max_rank = unit.clicks.front().rank;
    double mean_rr = 0.0;
    for (const logs::Click& click : unit.clicks) {
      min_rank = std::min(min_rank, click.rank);
      max_rank = std::max(max_rank, click.rank);
      mean_rr += 1.0 / static_cast<double>(click.rank);
    }
    f[2] = 1.0 / static_cast<double>(min_rank);
    f[3] = 1.0 / static_cast<double>(max_rank);
    f[4] = mean_rr / static_cast<double>(unit.clicks.size());
  } else {
    f[kClickMissing] = 1.0;
  }

  // Hover group.
  f[5] = static_cast<double>(unit.hovers.size());
  if (has_hovers) {
    std::set<int> clicked;
    for (const logs::Click& click : unit.clicks) clicked.insert(click.rank);
    std::size_t clicked_hovers = 0;
    int min_rank = unit.hovers.front().rank;
    int max_rank = unit.hovers.front().rank;
    double mean_rank = 0.0;
    for (const logs::Hover& hover : unit.hovers) {
      if (clicked.count(hover.rank) > 0) ++clicked_hovers;
      min_rank = std::min(min_rank, hover.rank);
      max_rank = std::max(max_rank, hover.rank);
      mean_rank += static_cast<double>(hover.rank);
    }
    f[6] = static_cast<double>(clicked_hovers) / static_cast<double>(unit.hovers.size());
    // Ranks skipped between consecutive hovers; a direct neighbor skips 0.
    if (unit.hovers.size() >= 2) {
      double skipped = 0.0;
      for (std::size_t i = 0; i + 1 < unit.hovers.size(); ++i) {
        const int gap =
            std::abs(unit.hovers[i + 1].rank - unit.hovers[i].rank) - 1;
        skipped += static_cast<double>(std::max(gap, 0));
      }
      f[7] = skipped / static_cast<double>(unit.hovers.size() - 1);
    }
    f[8] = static_cast<double>(max_rank);
    f[9] = static_cast<double>(min_rank);
    f[10] = mean_rank / static_cast<double>(unit.hovers.size());
  } else {
    f[kHoverMissing] = 1.0;
  }

  // Dwell group.
  f[11] = unit.serp_time_seconds;
  if (has_clicks) {
    double total_dwell = 0.0;
    std::int64_t first_click = unit.clicks.front().timestamp;
    for (const logs::Click& click : unit.clicks) {
      total_dwell += click.dwell_seconds;
      first_click = std::min(first_click, click.timestamp);
    }
    f[12] = total_dwell;
    f[13] = static_cast<double>(first_click - unit.start_timestamp) / 1000.0;
    f[15] = total_dwell / static_cast<double>(unit.clicks.size());
  }
  if (has_hovers) {
    double total = 0.0;
    for (const logs::Hover& hover : unit.hovers) total += hover.duration_seconds();
    f[14] = total / static_cast<double>(unit.hovers.size());
  }
  if (!has_clicks || !has_hovers) f[kDwellMissing] = 1.0;

  // Query group.
  f[16] = static_cast<double>(codepoint_count(unit.query_text));
  const std::vector<std::string> terms = text::tokenize(unit.query_text, tokenizer);
  f[17] = static_cast<double>(terms.size());
  if (!terms.empty()) {
    const std::set<std::string> unique(terms.begin(), terms.end());
    f[18] = static_cast<double>(unique.size()) / static_cast<double>(terms.size());
  }
  f[19] = static_cast<double>(unit.pages_viewed);
  return f;
}

std::vector<SatInstance> make_instances(const std::vector<logs::Session>& sessions,
                                        const text::TokenizerOptions& tokenizer) {
  std::vector<SatInstance> instances;
  for (const logs::Session& session : sessions) {
    std::optional<taxonomy::Intent> intent;
    if (session.intent) intent = taxonomy::as_intent(session.intent->value);
    for (std::size_t q = 0; q < session.queries.size(); ++q) {
      const logs::QueryUnit& unit = session.queries[q];
      if (!unit.satisfaction) continue;
      SatInstance instance;
      instance.session_id = session.session_id;
      instance.query_id = session.session_id + "-q" + std::to_string(q + 1);
      instance.features = extract_features(unit, tokenizer);
      instance.intent = intent;
      instance.graded = *unit.satisfaction;
      instance.label = binarize_satisfaction(*unit.satisfaction);
      instances.push_back(std::move(instance));
    }
  }
  return instances;
}

std::string_view mode_name(Mode mode) {
  return mode == Mode::kIntentAgnostic ? "agnostic" : "aware";
}

Mode parse_mode(std::string_view text) {
  if (text == "agnostic") return Mode::kIntentAgnostic;
  if (text == "aware") return Mode::kIntentAware;
  throw ValidationError("unknown mode: " + std::string(text));
}

std::vector<int> session_folds(const std::vector<SatInstance>& instances, int n_folds,
                               std::uint64_t seed) {
  require(n_folds >= 2, "session_folds: need at least two folds");
  require(!instances.empty(), "session_folds: no instances");

  // Session order and per-session labels, first appearance order.
  std::vector<std::string> session_order;
  std::map<std::string, std::pair<std::size_t, std::size_t>> label_counts;  // pos, total
  for (const SatInstance& instance : instances) {
    auto [it, inserted] = label_counts.try_emplace(instance.session_id, 0u, 0u);
    if (inserted) session_order.push_back(instance.session_id);
    it->second.first += static_cast<std::size_t>(instance.label);
    it->second.second += 1;
  }

  // Strata by majority label; ties count as satisfied.
  std::vector<std::string> strata[2];
  for (const std::string& session_id : session_order) {
    const auto& [positives, total] = label_counts[session_id];
    const int majority = 2 * positives >= total ? 1 : 0;
    strata[majority].push_back(session_id);
  }

  Rng rng(Rng::mix(seed, 0x5e55'010fu));
  std::map<std::string, int> fold_of;
  for (auto& stratum : strata) {
    rng.shuffle(stratum);
    for (std::size_t i = 0; i < stratum.size(); ++i) {
      fold_of[stratum[i]] = static_cast<int>(i % static_cast<std::size_t>(n_folds));
    }
  }

  std::vector<int> folds;
  folds.reserve(instances.size());
  for (const SatInstance& instance : instances) {
    folds.push_back(fold_of[instance.session_id]);
  }
  return folds;
}

namespace {

// Assembles the feature matrix columns for the configured groups and mode.
std::vector<std::size_t> selected_columns(const std::vector<FeatureGroup>& groups) {
  require(!groups.empty(), "experiment needs at least one feature group");
  std::set<FeatureGroup> chosen(groups.begin(), groups.end());
  std::vector<std::size_t> columns;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (chosen.count(feature_group(i)) > 0) columns.push_back(i);
  }
  return columns;
}

}  // namespace

ExperimentResult run_experiment(const std::vector<SatInstance>& instances,
                                const ExperimentConfig& config) {
  require(instances.size() >= 2, "run_experiment: need at least two instances");
  config.boost.validate();
  const std::vector<std::size_t> columns = selected_columns(config.groups);
  const bool aware = config.mode == Mode::kIntentAware;
  if (aware) {
    for (const SatInstance& instance : instances) {
      require(instance.intent.has_value(),
              "run_experiment: intent-aware mode needs an intent on every instance");
    }
  }

  const std::size_t width = columns.size() + (aware ? taxonomy::kAllIntents.size() : 0);
  boosting::FeatureMatrix x(instances.size(), width);
  std::vector<double> labels(instances.size());
  for (std::size_t r = 0; r < instances.size(); ++r) {
    const SatInstance& instance = instances[r];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      x.set(r, c, instance.features[columns[c]]);
    }
    if (aware) {
      const auto hot = static_cast<std::size_t>(*instance.intent);
      x.set(r, columns.size() + hot, 1.0);
    }
    labels[r] = static_cast<double>(instance.label);
  }

  const std::vector<int> folds = session_folds(instances, config.n_folds, config.seed);

  ExperimentResult result;
  for (int fold = 0; fold < config.n_folds; ++fold) {
    std::vector<std::uint32_t> train_rows, test_rows;
    for (std::size_t r = 0; r < instances.size(); ++r) {
      (folds[r] == fold ? test_rows : train_rows).push_back(static_cast<std::uint32_t>(r));
    }
    require(!train_rows.empty() && !test_rows.empty(),
            "run_experiment: fold " + std::to_string(fold) + " is empty");

    boosting::FeatureMatrix train_x(train_rows.size(), width);
    std::vector<double> train_y(train_rows.size());
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      for (std::size_t c = 0; c < width; ++c) train_x.set(i, c, x.at(train_rows[i], c));
      train_y[i] = labels[train_rows[i]];
    }

    boosting::BoostParams params = config.boost;
    params.seed = Rng::mix(config.seed, static_cast<std::uint64_t>(fold) + 17u);
    const boosting::TreeEnsemble model =
        boosting::gbdt_fit(train_x, train_y, boosting::Loss::kLogistic, params);

    std::vector<int> test_labels;
    std::vector<double> test_scores;
    for (std::uint32_t r : test_rows) {
      test_labels.push_back(static_cast<int>(labels[r]));
      test_scores.push_back(model.predict_raw(x.row(r)));
    }
    FoldResult fold_result;
    fold_result.n_train = train_rows.size();
    fold_result.n_test = test_rows.size();
    fold_result.auc = stats::roc_auc(test_labels, test_scores);  // needs both classes
    result.folds.push_back(fold_result);
    result.mean_auc += fold_result.auc;
  }
  result.mean_auc /= static_cast<double>(result.folds.size());
  return result;
}

std::vector<SatInstance> read_instances_jsonl(std::istream& in) {
  std::vector<SatInstance> instances;
  jsonl::for_each_record(in, [&](const nlohmann::json& record, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    require(record.contains("session_id") && record["session_id"].is_string(),
            where + "instance needs 'session_id'");
    require(record.contains("query_id") && record["query_id"].is_string(),
            where + "instance needs 'query_id'");
    require(record.contains("features") && record["features"].is_object(),
            where + "instance needs a 'features' object");
    SatInstance instance;
    instance.session_id = record["session_id"].get<std::string>();
    instance.query_id = record["query_id"].get<std::string>();
    if (record.contains("graded")) {
      instance.graded = record["graded"].get<int>();
      require(instance.graded >= 1 && instance.graded <= 5,
              where + "graded satisfaction must lie in 1..5");
      instance.label = binarize_satisfaction(instance.graded);
    }
    if (record.contains("label")) {
      const int label = record["label"].get<int>();
      require(label == 0 || label == 1, where + "label must be 0 or 1");
      instance.label = label;
    }
    require(record.contains("graded") || record.contains("label"),
            where + "instance needs 'graded' or 'label'");
    if (record.contains("intent")) {
      instance.intent = taxonomy::parse_intent(record["intent"].get<std::string>());
    }
    const auto& features = record["features"];
    for (const auto& [name, value] : features.items()) {
      bool known = false;
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (kFeatureNames[i] == name) {
          instance.features[i] = value.get<double>();
          known = true;
          break;
        }
      }
      require(known, where + "unknown feature: " + name);
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      require(features.contains(std::string(kFeatureNames[i])),
              where + "missing feature: " + std::string(kFeatureNames[i]));
    }
    instances.push_back(std::move(instance));
  });
  return instances;
}

void write_instances_jsonl(std::ostream& out, const std::vector<SatInstance>& instances) {
  for (const SatInstance& instance : instances) {
    nlohmann::json record;
    record["session_id"] = instance.session_id;
    record["query_id"] = instance.query_id;
    if (instance.graded >= 1) record["graded"] = instance.graded;
    record["label"] = instance.label;
    if (instance.intent) record["intent"] = std::string(taxonomy::code(*instance.intent));
    nlohmann::json features = nlohmann::json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      features[std::string(kFeatureNames[i])] = instance.features[i];
    }
    record["features"] = std::move(features);
    out << record.dump() << "\n";
  }
}

}  // namespace intentir::sat
