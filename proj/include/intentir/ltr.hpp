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

#ifndef INTENTIR_LTR_HPP_
#define INTENTIR_LTR_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intentir/boosting.hpp"
#include "intentir/session_log.hpp"
#include "intentir/taxonomy.hpp"
#include "intentir/text_features.hpp"

namespace intentir::ltr {

inline constexpr std::size_t kRankFeatureCount = 5;
using RankFeatures = std::array<double, kRankFeatureCount>;

// One query-document pair with its content features, click-derived relevance
// and the intent of the originating session.
struct RankingInstance {
  std::string query_id;
  std::string session_id;
  std::string doc_id;
  RankFeatures features{};
  int relevance = 0;
  taxonomy::Intent intent = taxonomy::Intent::kParticularCase;
};

struct QueryGroup {
  std::string query_id;
  std::string session_id;
  taxonomy::Intent intent = taxonomy::Intent::kParticularCase;
  std::vector<std::size_t> rows;  // indices into the instance vector
};

// Groups instances by query_id in first-appearance order. All instances of a
// query must agree on session and intent, and doc_ids must be unique.
std::vector<QueryGroup> group_by_query(const std::vector<RankingInstance>& instances);

// DCG uses gain 2^rel - 1 with discount 1 / log2(position + 1); NDCG
// normalizes by the ideal ordering and is 0 when nothing is relevant.
// Inputs are relevance grades in ranked order.
double dcg_at_k(const std::vector<int>& ranked_rels, std::size_t k);
double ndcg_at_k(const std::vector<int>& ranked_rels, std::size_t k);

// Binary average precision (grades above 0 count as relevant); 0 when
// nothing is relevant.
double average_precision(const std::vector<int>& ranked_rels);

struct RankMetrics {
  double ndcg5 = 0.0;
  double ndcg10 = 0.0;
  double ndcg15 = 0.0;
  double map = 0.0;
};

// Macro-averaged metrics of per-instance scores. Ties rank by doc_id
// ascending so evaluation is deterministic.
RankMetrics evaluate_ranking(const std::vector<RankingInstance>& instances,
                             const std::vector<double>& scores);

enum class Algorithm : int { kAdaRank = 0, kRankBoost = 1, kLambdaMart = 2 };

inline constexpr std::array<Algorithm, 3> kAllAlgorithms = {
    Algorithm::kAdaRank, Algorithm::kRankBoost, Algorithm::kLambdaMart};

std::string_view algorithm_name(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);  // throws ValidationError

struct AdaRankStage {
  int feature = 0;
  int sign = 1;  // +1 ranks by the feature, -1 by its negation
  double alpha = 0.0;
};

struct RankBoostStage {
  int feature = 0;
  double threshold = 0.0;
  double alpha = 0.0;
};

// A trained ranking model of any of the three algorithms.
class Ranker {
 public:
  static Ranker adarank(std::vector<AdaRankStage> stages);
  static Ranker rankboost(std::vector<RankBoostStage> stages);
  static Ranker lambdamart(boosting::TreeEnsemble ensemble);

  Algorithm algorithm() const { return algorithm_; }
  double score(const RankFeatures& features) const;
  std::size_t n_stages() const;

 private:
  Ranker() = default;
  Algorithm algorithm_ = Algorithm::kAdaRank;
  std::vector<AdaRankStage> adarank_stages_;
  std::vector<RankBoostStage> rankboost_stages_;
  boosting::TreeEnsemble ensemble_;
};

struct TrainOptions {
  Algorithm algorithm = Algorithm::kAdaRank;
  int adarank_max_rounds = 100;
  int rankboost_rounds = 300;
  int rankboost_max_thresholds = 255;
  boosting::BoostParams lambdamart;  // tree count, depth, learning rate
  int ndcg_k = 10;                   // selection metric cutoff
  std::uint64_t seed = 0;

  void validate() const;
};

// Trains one ranker. When a validation set is given, the returned model is
// the round prefix with the best validation NDCG@ndcg_k.
Ranker train_ranker(const std::vector<RankingInstance>& train,
                    const TrainOptions& options,
                    const std::vector<RankingInstance>* validation = nullptr);

// Query-level mixture over per-intent rankers. The hard form routes each
// query to the ranker of its intent; the soft form mixes scores with the
// supplied intent probabilities.
class IntentConditionalRanker {
 public:
  void set_ranker(taxonomy::Intent intent, Ranker ranker);
  bool has_ranker(taxonomy::Intent intent) const;
  const Ranker& ranker(taxonomy::Intent intent) const;

  double score(taxonomy::Intent intent, const RankFeatures& features) const;
  double score_mixture(const std::array<double, 5>& intent_probs,
                       const RankFeatures& features) const;

 private:
  std::map<taxonomy::Intent, Ranker> rankers_;
};

// Click-based relevance: each query unit with recorded impressions and at
// least one click yields one query, clicked documents relevant. Sessions are
// kept only when their label is one of allowed_intents.
struct LabelingStats {
  std::size_t queries_kept = 0;
  std::size_t dropped_no_clicks = 0;
  std::size_t dropped_no_impressions = 0;
  std::size_t dropped_intent = 0;
};

std::vector<RankingInstance> labels_from_clicks(
    const std::vector<logs::Session>& sessions, const text::Corpus& corpus,
    const std::vector<taxonomy::Intent>& allowed_intents =
        {taxonomy::Intent::kParticularCase, taxonomy::Intent::kCharacterization,
         taxonomy::Intent::kPenalty, taxonomy::Intent::kProcedure},
    const text::Bm25Params& bm25 = {}, const text::TokenizerOptions& tokenizer = {},
    LabelingStats* stats = nullptr);

struct CvOptions {
  int n_folds = 5;
  double validation_fraction = 0.1;  // of training sessions, for round selection
  std::uint64_t seed = 0;
  bool intent_aware = false;

  void validate() const;
};

struct CvResult {
  RankMetrics mean;                   // macro over every test query
  std::vector<RankMetrics> per_fold;  // macro within each fold
  std::size_t n_queries = 0;
};

// K-fold cross-validation. Folds partition sessions, stratified by intent;
// every query is tested exactly once. Intent-aware runs train one ranker per
// intent on the fold's training split and route test queries by intent.
CvResult cross_validate(const std::vector<RankingInstance>& instances,
                        const TrainOptions& train_options, const CvOptions& cv_options);

std::vector<RankingInstance> read_instances_jsonl(std::istream& in);
void write_instances_jsonl(std::ostream& out,
                           const std::vector<RankingInstance>& instances);

}  // namespace intentir::ltr

#endif  // INTENTIR_LTR_HPP_
