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

#include <fstream>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "intentir/error.hpp"
#include "intentir/stats.hpp"
#include "intentir/taxonomy.hpp"

using namespace intentir;
using taxonomy::Intent;
using taxonomy::Label;

namespace {

taxonomy::AnnotatorLabel single(Label value) {
  taxonomy::AnnotatorLabel label;
  label.value = value;
  return label;
}

taxonomy::AnnotatorLabel multi(std::vector<Intent> pool) {
  taxonomy::AnnotatorLabel label;
  label.value = Label::kMulti;
  label.potential_intents = std::move(pool);
  return label;
}

}  // namespace

TEST_SUITE_BEGIN("taxonomy");

TEST_CASE("codes round-trip") {
  CHECK(taxonomy::code(Intent::kParticularCase) == "PC");
  CHECK(taxonomy::code(Label::kOthers) == "O");
  CHECK(taxonomy::code(Label::kMulti) == "M");
  for (Intent intent : taxonomy::kAllIntents) {
    CHECK(taxonomy::parse_intent(std::string(taxonomy::code(intent))) == intent);
  }
  for (Label label : taxonomy::kAllLabels) {
    CHECK(taxonomy::parse_label(std::string(taxonomy::code(label))) == label);
  }
  CHECK_THROWS_AS(taxonomy::parse_intent("M"), ValidationError);
  CHECK_THROWS_AS(taxonomy::parse_label("bogus"), ValidationError);
  CHECK(taxonomy::as_intent(Label::kPenalty) == Intent::kPenalty);
  CHECK(!taxonomy::as_intent(Label::kMulti).has_value());
  CHECK(!taxonomy::as_intent(Label::kOthers).has_value());
  CHECK(taxonomy::to_label(Intent::kInterest) == Label::kInterest);
}

TEST_CASE("criteria walk maps every path") {
  using taxonomy::CriteriaAnswers;
  using taxonomy::ProblemKind;
  using taxonomy::SearchPurpose;

  CriteriaAnswers a;
  a.purpose = SearchPurpose::kParticularCase;
  CHECK(taxonomy::classify_by_criteria(a) == Intent::kParticularCase);

  a.purpose = SearchPurpose::kLearning;
  a.clear_objective = false;
  CHECK(taxonomy::classify_by_criteria(a) == Intent::kInterest);

  a.clear_objective = true;
  a.problem_kind = ProblemKind::kCharacterization;
  CHECK(taxonomy::classify_by_criteria(a) == Intent::kCharacterization);
  a.problem_kind = ProblemKind::kPenalty;
  CHECK(taxonomy::classify_by_criteria(a) == Intent::kPenalty);
  a.problem_kind = ProblemKind::kProcedure;
  CHECK(taxonomy::classify_by_criteria(a) == Intent::kProcedure);

  a.problem_kind.reset();
  CHECK_THROWS_AS(taxonomy::classify_by_criteria(a), ValidationError);
  a.clear_objective.reset();
  CHECK_THROWS_AS(taxonomy::classify_by_criteria(a), ValidationError);
}

TEST_CASE("majority vote picks a unique winner covering half the votes") {
  taxonomy::AnnotationSet set{"item", {single(Label::kCharacterization),
                                       single(Label::kCharacterization),
                                       single(Label::kPenalty)}};
  const taxonomy::AnnotatorLabel result = taxonomy::aggregate_majority(set);
  CHECK(result.value == Label::kCharacterization);
  CHECK(result.potential_intents.empty());
}

TEST_CASE("majority vote pools disagreements into Multi") {
  taxonomy::AnnotationSet set{"item", {single(Label::kParticularCase),
                                       single(Label::kCharacterization),
                                       single(Label::kPenalty)}};
  const taxonomy::AnnotatorLabel result = taxonomy::aggregate_majority(set);
  REQUIRE(result.value == Label::kMulti);
  CHECK(result.potential_intents ==
        std::vector<Intent>{Intent::kParticularCase, Intent::kCharacterization,
                            Intent::kPenalty});
}

TEST_CASE("Others votes do not enter the pooled intents") {
  taxonomy::AnnotationSet set{"item", {single(Label::kOthers),
                                       single(Label::kCharacterization),
                                       single(Label::kPenalty)}};
  const taxonomy::AnnotatorLabel result = taxonomy::aggregate_majority(set);
  REQUIRE(result.value == Label::kMulti);
  CHECK(result.potential_intents ==
        std::vector<Intent>{Intent::kCharacterization, Intent::kPenalty});
}

TEST_CASE("a one-intent pool collapses to that intent") {
  taxonomy::AnnotationSet set{"item",
                              {single(Label::kOthers), single(Label::kPenalty)}};
  const taxonomy::AnnotatorLabel result = taxonomy::aggregate_majority(set);
  CHECK(result.value == Label::kPenalty);
  CHECK(result.potential_intents.empty());
}

TEST_CASE("winning Multi keeps the union of its voters' pools") {
  taxonomy::AnnotationSet set{
      "item", {multi({Intent::kParticularCase, Intent::kCharacterization}),
               multi({Intent::kCharacterization, Intent::kPenalty}),
               single(Label::kProcedure)}};
  const taxonomy::AnnotatorLabel result = taxonomy::aggregate_majority(set);
  REQUIRE(result.value == Label::kMulti);
  CHECK(result.potential_intents ==
        std::vector<Intent>{Intent::kParticularCase, Intent::kCharacterization,
                            Intent::kPenalty});
}

TEST_CASE("losing Multi votes still contribute their pool on disagreement") {
  taxonomy::AnnotationSet set{
      "item", {multi({Intent::kParticularCase, Intent::kCharacterization}),
               single(Label::kPenalty), single(Label::kProcedure)}};
  const taxonomy::AnnotatorLabel result = taxonomy::aggregate_majority(set);
  REQUIRE(result.value == Label::kMulti);
  CHECK(result.potential_intents ==
        std::vector<Intent>{Intent::kParticularCase, Intent::kCharacterization,
                            Intent::kPenalty, Intent::kProcedure});
}

TEST_CASE("label validation") {
  taxonomy::AnnotatorLabel bad;
  bad.value = Label::kPenalty;
  bad.potential_intents = {Intent::kPenalty, Intent::kProcedure};
  CHECK_THROWS_AS(taxonomy::validate(bad), ValidationError);

  taxonomy::AnnotatorLabel short_pool;
  short_pool.value = Label::kMulti;
  short_pool.potential_intents = {Intent::kPenalty};
  CHECK_THROWS_AS(taxonomy::validate(short_pool), ValidationError);

  taxonomy::AnnotationSet empty{"item", {}};
  CHECK_THROWS_AS(taxonomy::aggregate_majority(empty), ValidationError);
}

TEST_CASE("label distribution counts and shares") {
  const std::vector<taxonomy::AnnotatorLabel> labels = {
      single(Label::kParticularCase), single(Label::kParticularCase),
      single(Label::kCharacterization),
      multi({Intent::kPenalty, Intent::kProcedure})};
  const taxonomy::LabelDistribution dist = taxonomy::label_distribution(labels);
  CHECK(dist.total == 4);
  CHECK(dist.counts[0] == 2);
  CHECK(dist.counts[1] == 1);
  CHECK(dist.counts[6] == 1);
  CHECK(dist.share[0] == doctest::Approx(0.5));
  CHECK(dist.share[6] == doctest::Approx(0.25));
}

TEST_CASE("co-occurrence counts each pool pair once per item") {
  const std::vector<taxonomy::AnnotatorLabel> finals = {
      multi({Intent::kParticularCase, Intent::kCharacterization}),
      multi({Intent::kParticularCase, Intent::kCharacterization, Intent::kPenalty}),
      single(Label::kParticularCase)};
  const taxonomy::CooccurrenceMatrix matrix = taxonomy::cooccurrence_matrix(finals);
  CHECK(matrix.pair_count == 4);
  CHECK(matrix.skipped_items == 0);
  CHECK(matrix.at(Intent::kParticularCase, Intent::kCharacterization) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(matrix.at(Intent::kCharacterization, Intent::kParticularCase) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(matrix.at(Intent::kParticularCase, Intent::kPenalty) ==
        doctest::Approx(0.25).epsilon(1e-12));
  double upper = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = i + 1; j < 5; ++j) upper += matrix.share[i][j];
  }
  CHECK(upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("co-occurrence skips degenerate pools and requires pairs") {
  taxonomy::AnnotatorLabel degenerate;
  degenerate.value = Label::kMulti;  // empty pool, constructed directly
  const std::vector<taxonomy::AnnotatorLabel> finals = {
      degenerate, multi({Intent::kPenalty, Intent::kProcedure})};
  const taxonomy::CooccurrenceMatrix matrix = taxonomy::cooccurrence_matrix(finals);
  CHECK(matrix.skipped_items == 1);
  CHECK(matrix.pair_count == 1);
  CHECK_THROWS_AS(taxonomy::cooccurrence_matrix({single(Label::kPenalty)}),
                  ValidationError);
}

TEST_CASE("annotations JSONL round-trips") {
  std::vector<taxonomy::AnnotationSet> sets;
  sets.push_back({"q1", {single(Label::kCharacterization), single(Label::kOthers)}});
  taxonomy::AnnotatorLabel explained = multi({Intent::kPenalty, Intent::kProcedure});
  explained.explanation = "both sentencing and jurisdiction";
  sets.push_back({"q2", {explained, single(Label::kPenalty)}});

  std::stringstream buffer;
  taxonomy::write_annotations_jsonl(buffer, sets);
  const std::vector<taxonomy::AnnotationSet> readback =
      taxonomy::read_annotations_jsonl(buffer);
  REQUIRE(readback.size() == 2);
  CHECK(readback[0].item_id == "q1");
  CHECK(readback[0].labels[0].value == Label::kCharacterization);
  CHECK(readback[1].labels[0].value == Label::kMulti);
  CHECK(readback[1].labels[0].potential_intents ==
        std::vector<Intent>{Intent::kPenalty, Intent::kProcedure});
  CHECK(readback[1].labels[0].explanation == "both sentencing and jurisdiction");
}

TEST_CASE("annotations JSONL rejects malformed records with line numbers") {
  std::stringstream bad("{\"item_id\": \"q1\", \"labels\": [{\"value\": \"XX\"}]}\n");
  CHECK_THROWS_WITH_AS(taxonomy::read_annotations_jsonl(bad),
                       doctest::Contains("line 1"), ValidationError);
  std::stringstream missing("{\"labels\": []}\n");
  CHECK_THROWS_AS(taxonomy::read_annotations_jsonl(missing), ValidationError);
}

TEST_CASE("bundled annotation fixture has the frozen aggregate profile") {
  std::ifstream in(INTENTIR_ANNOTATIONS_PATH);
  REQUIRE(in.good());
  const std::vector<taxonomy::AnnotationSet> sets =
      taxonomy::read_annotations_jsonl(in);
  REQUIRE(sets.size() == 598);

  std::vector<taxonomy::AnnotatorLabel> finals;
  std::vector<std::vector<int>> counts;
  for (const taxonomy::AnnotationSet& set : sets) {
    REQUIRE(set.labels.size() == 3);
    finals.push_back(taxonomy::aggregate_majority(set));
    std::vector<int> row(7, 0);
    for (const taxonomy::AnnotatorLabel& label : set.labels) {
      ++row[static_cast<std::size_t>(label.value)];
    }
    counts.push_back(std::move(row));
  }

  const taxonomy::LabelDistribution dist = taxonomy::label_distribution(finals);
  CHECK(dist.counts ==
        std::array<std::size_t, 7>{127, 328, 54, 24, 1, 4, 60});
  CHECK(dist.share[0] == doctest::Approx(127.0 / 598.0).epsilon(1e-12));
  CHECK(dist.share[6] == doctest::Approx(60.0 / 598.0).epsilon(1e-12));

  const taxonomy::CooccurrenceMatrix matrix = taxonomy::cooccurrence_matrix(finals);
  CHECK(matrix.pair_count == 108);
  CHECK(matrix.skipped_items == 0);
  CHECK(matrix.at(Intent::kParticularCase, Intent::kCharacterization) ==
        doctest::Approx(25.0 / 108.0).epsilon(1e-12));
  CHECK(matrix.at(Intent::kCharacterization, Intent::kPenalty) ==
        doctest::Approx(20.0 / 108.0).epsilon(1e-12));
  CHECK(matrix.at(Intent::kProcedure, Intent::kInterest) ==
        doctest::Approx(1.0 / 108.0).epsilon(1e-12));

  // Frozen via an exact-arithmetic reimplementation: 719401/1046806.
  CHECK(stats::fleiss_kappa(counts) ==
        doctest::Approx(0.687234310846518).epsilon(1e-12));
}

TEST_SUITE_END();
