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

#include "intentir/taxonomy.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <json.hpp>

#include "intentir/error.hpp"
#include "intentir/jsonl.hpp"

namespace intentir::taxonomy {

namespace {

constexpr std::array<std::string_view, 7> kLabelCodes = {"PC", "Ch", "Pe", "Pr",
                                                         "In", "O",  "M"};
constexpr std::array<std::string_view, 5> kIntentNames = {
    "Particular Case", "Characterization", "Penalty", "Procedure", "Interest"};

}  // namespace

std::string_view code(Intent intent) { return kLabelCodes[static_cast<std::size_t>(intent)]; }

std::string_view code(Label label) { return kLabelCodes[static_cast<std::size_t>(label)]; }

std::string_view display_name(Intent intent) {
  return kIntentNames[static_cast<std::size_t>(intent)];
}

std::optional<Intent> intent_from_code(std::string_view text) {
  for (Intent intent : kAllIntents) {
    if (code(intent) == text) return intent;
  }
  return std::nullopt;
}

std::optional<Label> label_from_code(std::string_view text) {
  for (Label label : kAllLabels) {
    if (code(label) == text) return label;
  }
  return std::nullopt;
}

Intent parse_intent(std::string_view text) {
  const auto intent = intent_from_code(text);
  require(intent.has_value(), "unknown intent code: " + std::string(text));
  return *intent;
}

Label parse_label(std::string_view text) {
  const auto label = label_from_code(text);
  require(label.has_value(), "unknown label code: " + std::string(text));
  return *label;
}

Label to_label(Intent intent) { return static_cast<Label>(static_cast<int>(intent)); }

std::optional<Intent> as_intent(Label label) {
  if (label == Label::kOthers || label == Label::kMulti) return std::nullopt;
  return static_cast<Intent>(static_cast<int>(label));
}

Intent classify_by_criteria(const CriteriaAnswers& answers) {
  if (answers.purpose == SearchPurpose::kParticularCase) {
    return Intent::kParticularCase;
  }
  require(answers.clear_objective.has_value(),
          "classify_by_criteria: learning purpose needs the clear-objective answer");
  if (!*answers.clear_objective) {
    return Intent::kInterest;
  }
  require(answers.problem_kind.has_value(),
          "classify_by_criteria: a clear objective needs the problem-kind answer");
  switch (*answers.problem_kind) {
    case ProblemKind::kCharacterization:
      return Intent::kCharacterization;
    case ProblemKind::kPenalty:
      return Intent::kPenalty;
    case ProblemKind::kProcedure:
      return Intent::kProcedure;
  }
  throw ValidationError("classify_by_criteria: unknown problem kind");
}

void validate(const AnnotatorLabel& label) {
  if (label.potential_intents.empty()) return;
  require(label.value == Label::kMulti,
          "potential_intents given but the label is not Multi");
  require(label.potential_intents.size() >= 2,
          "a Multi label needs at least two potential intents");
  std::set<Intent> seen(label.potential_intents.begin(), label.potential_intents.end());
  require(seen.size() == label.potential_intents.size(),
          "potential_intents must be distinct");
}

void validate(const AnnotationSet& set) {
  require(!set.item_id.empty(), "annotation set needs an item_id");
  require(!set.labels.empty(), "annotation set needs at least one label");
  for (const AnnotatorLabel& label : set.labels) validate(label);
}

AnnotatorLabel aggregate_majority(const AnnotationSet& set) {
  validate(set);
  std::array<std::size_t, 7> counts{};
  for (const AnnotatorLabel& label : set.labels) {
    ++counts[static_cast<std::size_t>(label.value)];
  }
  const std::size_t n = set.labels.size();
  const std::size_t threshold = (n + 1) / 2;

  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = i;
  }
  const bool unique_max =
      std::count(counts.begin(), counts.end(), counts[best]) == 1;

  AnnotatorLabel result;
  if (unique_max && counts[best] >= threshold) {
    result.value = static_cast<Label>(static_cast<int>(best));
    if (result.value == Label::kMulti) {
      std::set<Intent> pool;
      for (const AnnotatorLabel& label : set.labels) {
        if (label.value != Label::kMulti) continue;
        pool.insert(label.potential_intents.begin(), label.potential_intents.end());
      }
      result.potential_intents.assign(pool.begin(), pool.end());
    }
    return result;
  }

  // No winner: the votes disagree, so the item carries several intents.
  std::set<Intent> pool;
  for (const AnnotatorLabel& label : set.labels) {
    if (const auto intent = as_intent(label.value)) {
      pool.insert(*intent);
    } else if (label.value == Label::kMulti) {
      pool.insert(label.potential_intents.begin(), label.potential_intents.end());
    }
  }
  if (pool.size() == 1) {
    result.value = to_label(*pool.begin());
    return result;
  }
  result.value = Label::kMulti;
  result.potential_intents.assign(pool.begin(), pool.end());
  return result;
}

LabelDistribution label_distribution(const std::vector<AnnotatorLabel>& labels) {
  require(!labels.empty(), "label_distribution: no labels given");
  LabelDistribution dist;
  dist.total = labels.size();
  for (const AnnotatorLabel& label : labels) {
    ++dist.counts[static_cast<std::size_t>(label.value)];
  }
  for (std::size_t i = 0; i < dist.counts.size(); ++i) {
    dist.share[i] = static_cast<double>(dist.counts[i]) / static_cast<double>(dist.total);
  }
  return dist;
}

CooccurrenceMatrix cooccurrence_matrix(const std::vector<AnnotatorLabel>& final_labels) {
  CooccurrenceMatrix matrix;
  std::array<std::array<std::size_t, 5>, 5> pair_counts{};
  for (const AnnotatorLabel& label : final_labels) {
    if (label.value != Label::kMulti) continue;
    if (label.potential_intents.size() < 2) {
      ++matrix.skipped_items;
      continue;
    }
    for (std::size_t i = 0; i < label.potential_intents.size(); ++i) {
      for (std::size_t j = i + 1; j < label.potential_intents.size(); ++j) {
        const auto a = static_cast<std::size_t>(label.potential_intents[i]);
        const auto b = static_cast<std::size_t>(label.potential_intents[j]);
        ++pair_counts[std::min(a, b)][std::max(a, b)];
        ++matrix.pair_count;
      }
    }
  }
  require(matrix.pair_count > 0, "cooccurrence_matrix: no intent pairs found");
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      const double value =
          static_cast<double>(pair_counts[i][j]) / static_cast<double>(matrix.pair_count);
      matrix.share[i][j] = value;
      matrix.share[j][i] = value;
    }
  }
  return matrix;
}

namespace {

AnnotatorLabel label_from_json(const nlohmann::json& record, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no) + ": ";
  require(record.is_object() && record.contains("value") && record["value"].is_string(),
          where + "label needs a string 'value'");
  AnnotatorLabel label;
  label.value = parse_label(record["value"].get<std::string>());
  if (record.contains("explanation")) {
    require(record["explanation"].is_string(), where + "'explanation' must be a string");
    label.explanation = record["explanation"].get<std::string>();
  }
  if (record.contains("potential_intents")) {
    require(record["potential_intents"].is_array(),
            where + "'potential_intents' must be an array");
    for (const auto& entry : record["potential_intents"]) {
      require(entry.is_string(), where + "potential intent codes must be strings");
      label.potential_intents.push_back(parse_intent(entry.get<std::string>()));
    }
    std::sort(label.potential_intents.begin(), label.potential_intents.end());
  }
  validate(label);
  return label;
}

}  // namespace

std::vector<AnnotationSet> read_annotations_jsonl(std::istream& in) {
  std::vector<AnnotationSet> sets;
  jsonl::for_each_record(in, [&](const nlohmann::json& record, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    try {
      require(record.contains("item_id") && record["item_id"].is_string(),
              where + "record needs a string 'item_id'");
      require(record.contains("labels") && record["labels"].is_array(),
              where + "record needs a 'labels' array");
      AnnotationSet set;
      set.item_id = record["item_id"].get<std::string>();
      for (const auto& entry : record["labels"]) {
        set.labels.push_back(label_from_json(entry, line_no));
      }
      validate(set);
      sets.push_back(std::move(set));
    } catch (const ValidationError& err) {
      const std::string what = err.what();
      if (what.rfind("line ", 0) == 0) throw;
      throw ValidationError(where + what);
    }
  });
  return sets;
}

void write_annotations_jsonl(std::ostream& out, const std::vector<AnnotationSet>& sets) {
  for (const AnnotationSet& set : sets) {
    nlohmann::json record;
    record["item_id"] = set.item_id;
    record["labels"] = nlohmann::json::array();
    for (const AnnotatorLabel& label : set.labels) {
      nlohmann::json entry;
      entry["value"] = std::string(code(label.value));
      if (label.explanation) entry["explanation"] = *label.explanation;
      if (!label.potential_intents.empty()) {
        nlohmann::json intents = nlohmann::json::array();
        for (Intent intent : label.potential_intents) intents.push_back(std::string(code(intent)));
        entry["potential_intents"] = std::move(intents);
      }
      record["labels"].push_back(std::move(entry));
    }
    out << record.dump() << "\n";
  }
}

}  // namespace intentir::taxonomy
