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

#ifndef INTENTIR_TAXONOMY_HPP_
#define INTENTIR_TAXONOMY_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace intentir::taxonomy {

// The five search intents of legal case retrieval users.
enum class Intent : int {
  kParticularCase = 0,   // locate one known, specific case
  kCharacterization = 1, // how should facts be legally characterized
  kPenalty = 2,          // what punishment applies
  kProcedure = 3,        // how a process is carried out
  kInterest = 4,         // browsing without a concrete problem
};

inline constexpr std::array<Intent, 5> kAllIntents = {
    Intent::kParticularCase, Intent::kCharacterization, Intent::kPenalty,
    Intent::kProcedure, Intent::kInterest};

// A label an annotator can assign: one intent, Others (no intent applies),
// or Multi (several intents at once).
enum class Label : int {
  kParticularCase = 0,
  kCharacterization = 1,
  kPenalty = 2,
  kProcedure = 3,
  kInterest = 4,
  kOthers = 5,
  kMulti = 6,
};

inline constexpr std::array<Label, 7> kAllLabels = {
    Label::kParticularCase, Label::kCharacterization, Label::kPenalty,
    Label::kProcedure,      Label::kInterest,         Label::kOthers,
    Label::kMulti};

std::string_view code(Intent intent);          // "PC", "Ch", "Pe", "Pr", "In"
std::string_view code(Label label);            // adds "O" and "M"
std::string_view display_name(Intent intent);
std::optional<Intent> intent_from_code(std::string_view text);
std::optional<Label> label_from_code(std::string_view text);
Intent parse_intent(std::string_view text);    // throws ValidationError
Label parse_label(std::string_view text);      // throws ValidationError

Label to_label(Intent intent);
std::optional<Intent> as_intent(Label label);  // nullopt for Others and Multi

// Answers to the three-step decision procedure annotators follow.
enum class SearchPurpose { kParticularCase, kLearning };
enum class ProblemKind { kCharacterization, kPenalty, kProcedure };

struct CriteriaAnswers {
  // Step 1: is the user after one particular case, or learning about a class
  // of cases?
  SearchPurpose purpose = SearchPurpose::kLearning;
  // Step 2 (learning only): does the user have a clear objective?
  std::optional<bool> clear_objective;
  // Step 3 (clear objective only): what kind of problem is it?
  std::optional<ProblemKind> problem_kind;
};

// Maps criteria answers to an intent. Missing answers that the path requires
// raise ValidationError.
Intent classify_by_criteria(const CriteriaAnswers& answers);

// One annotator's label for an item. potential_intents lists the individual
// intents an annotator saw behind a Multi label; it must be empty unless the
// value is Multi, and when present it holds two or more distinct intents.
struct AnnotatorLabel {
  Label value = Label::kOthers;
  std::optional<std::string> explanation;
  std::vector<Intent> potential_intents;
};

void validate(const AnnotatorLabel& label);

// All labels collected for one item.
struct AnnotationSet {
  std::string item_id;
  std::vector<AnnotatorLabel> labels;
};

void validate(const AnnotationSet& set);

// Majority vote over the labels of one item. A value wins when it is the
// unique most frequent label and covers at least half the votes (ceil(n/2)).
// Without a winner the item is Multi, and potential_intents collects the
// distinct intents across all votes (Multi votes contribute their own
// potential intents, Others contributes nothing). If only a single intent
// remains the vote collapses to that intent instead.
AnnotatorLabel aggregate_majority(const AnnotationSet& set);

struct LabelDistribution {
  std::array<std::size_t, 7> counts{};  // indexed by Label
  std::array<double, 7> share{};        // proportions, sum to 1
  std::size_t total = 0;
};

LabelDistribution label_distribution(const std::vector<AnnotatorLabel>& labels);

// Which intents appear together inside Multi items. Each unordered intent
// pair of an item counts once; shares are normalized by the total number of
// pairs, so the entries above the diagonal sum to 1. Items without at least
// two potential intents are skipped and counted.
struct CooccurrenceMatrix {
  std::array<std::array<double, 5>, 5> share{};  // symmetric, zero diagonal
  std::size_t pair_count = 0;
  std::size_t skipped_items = 0;

  double at(Intent a, Intent b) const {
    return share[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
};

CooccurrenceMatrix cooccurrence_matrix(const std::vector<AnnotatorLabel>& final_labels);

// JSONL records of the form
//   {"item_id": "...", "labels": [{"value": "Ch"},
//    {"value": "M", "potential_intents": ["Ch", "Pe"]}, ...]}
// Every record is validated on read.
std::vector<AnnotationSet> read_annotations_jsonl(std::istream& in);
void write_annotations_jsonl(std::ostream& out, const std::vector<AnnotationSet>& sets);

}  // namespace intentir::taxonomy

#endif  // INTENTIR_TAXONOMY_HPP_
