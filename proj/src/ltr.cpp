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

#include "intentir/ltr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "intentir/error.hpp"
#include "intentir/jsonl.hpp"
#include "intentir/rng.hpp"

namespace intentir::ltr {

namespace {

constexpr double kEps = 1e-10;

double log2_discount(std::size_t position_1_based) {
  return 1.0 / std::log2(static_cast<double>(position_1_based) + 1.0);
}

double gain(int relevance) { return std::exp2(static_cast<double>(relevance)) - 1.0; }

}  // namespace

std::vector<QueryGroup> group_by_query(const std::vector<RankingInstance>& instances) {
  require(!instances.empty(), "group_by_query: no instances");
  std::vector<QueryGroup> groups;
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const RankingInstance& instance = instances[i];
    require(!instance.query_id.empty() && !instance.doc_id.empty(),
            "ranking instances need query_id and doc_id");
    require(instance.relevance >= 0, "relevance grades must be non-negative");
    auto [it, inserted] = index_of.try_emplace(instance.query_id, groups.size());
    if (inserted) {
      QueryGroup group;
      group.query_id = instance.query_id;
      group.session_id = instance.session_id;
      group.intent = instance.intent;
      groups.push_back(std::move(group));
    }
    QueryGroup& group = groups[it->second];
    require(group.session_id == instance.session_id,
            "query " + instance.query_id + " spans several sessions");
    require(group.intent == instance.intent,
            "query " + instance.query_id + " carries conflicting intents");
    group.rows.push_back(i);
  }
  for (const QueryGroup& group : groups) {
    std::set<std::string> docs;
    for (std::size_t row : group.rows) docs.insert(instances[row].doc_id);
    require(docs.size() == group.rows.size(),
            "query " + group.query_id + " repeats a doc_id");
  }
  return groups;
}

double dcg_at_k(const std::vector<int>& ranked_rels, std::size_t k) {
  double dcg = 0.0;
  const std::size_t depth = std::min(k, ranked_rels.size());
  for (std::size_t i = 0; i < depth; ++i) {
    dcg += gain(ranked_rels[i]) * log2_discount(i + 1);
  }
  return dcg;
}

double ndcg_at_k(const std::vector<int>& ranked_rels, std::size_t k) {
  std::vector<int> ideal = ranked_rels;
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());
  const double idcg = dcg_at_k(ideal, k);
  if (idcg <= 0.0) return 0.0;
  return dcg_at_k(ranked_rels, k) / idcg;
}

double average_precision(const std::vector<int>& ranked_rels) {
  std::size_t n_relevant = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked_rels.size(); ++i) {
    if (ranked_rels[i] > 0) {
      ++n_relevant;
      sum += static_cast<double>(n_relevant) / static_cast<double>(i + 1);
    }
  }
  if (n_relevant == 0) return 0.0;
  return sum / static_cast<double>(n_relevant);
}

namespace {

// Rows of one query ordered by score descending, doc_id ascending on ties.
std::vector<std::size_t> ranked_rows(const std::vector<RankingInstance>& instances,
                                     const std::vector<std::size_t>& rows,
                                     const std::vector<double>& scores) {
  std::vector<std::size_t> order = rows;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return instances[a].doc_id < instances[b].doc_id;
  });
  return order;
}

std::vector<int> ranked_rels(const std::vector<RankingInstance>& instances,
                             const std::vector<std::size_t>& rows,
                             const std::vector<double>& scores) {
  std::vector<int> rels;
  rels.reserve(rows.size());
  for (std::size_t row : ranked_rows(instances, rows, scores)) {
    rels.push_back(instances[row].relevance);
  }
  return rels;
}

double query_ndcg(const std::vector<RankingInstance>& instances, const QueryGroup& group,
                  const std::vector<double>& scores, std::size_t k) {
  return ndcg_at_k(ranked_rels(instances, group.rows, scores), k);
}

double macro_ndcg(const std::vector<RankingInstance>& instances,
                  const std::vector<QueryGroup>& groups,
                  const std::vector<double>& scores, std::size_t k) {
  double total = 0.0;
  for (const QueryGroup& group : groups) {
    total += query_ndcg(instances, group, scores, k);
  }
  return total / static_cast<double>(groups.size());
}

}  // namespace

RankMetrics evaluate_ranking(const std::vector<RankingInstance>& instances,
                             const std::vector<double>& scores) {
  require(scores.size() == instances.size(), "evaluate_ranking: score count mismatch");
  const std::vector<QueryGroup> groups = group_by_query(instances);
  RankMetrics metrics;
  for (const QueryGroup& group : groups) {
    const std::vector<int> rels = ranked_rels(instances, group.rows, scores);
    metrics.ndcg5 += ndcg_at_k(rels, 5);
    metrics.ndcg10 += ndcg_at_k(rels, 10);
    metrics.ndcg15 += ndcg_at_k(rels, 15);
    metrics.map += average_precision(rels);
  }
  const double n = static_cast<double>(groups.size());
  metrics.ndcg5 /= n;
  metrics.ndcg10 /= n;
  metrics.ndcg15 /= n;
  metrics.map /= n;
  return metrics;
}

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAdaRank:
      return "adarank";
    case Algorithm::kRankBoost:
      return "rankboost";
    case Algorithm::kLambdaMart:
      return "lambdamart";
  }
  throw InternalError("unknown algorithm");
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm algorithm : kAllAlgorithms) {
    if (algorithm_name(algorithm) == text) return algorithm;
  }
  throw ValidationError("unknown ranking algorithm: " + std::string(text));
}

Ranker Ranker::adarank(std::vector<AdaRankStage> stages) {
  Ranker ranker;
  ranker.algorithm_ = Algorithm::kAdaRank;
  ranker.adarank_stages_ = std::move(stages);
  return ranker;
}

Ranker Ranker::rankboost(std::vector<RankBoostStage> stages) {
  Ranker ranker;
  ranker.algorithm_ = Algorithm::kRankBoost;
  ranker.rankboost_stages_ = std::move(stages);
  return ranker;
}

Ranker Ranker::lambdamart(boosting::TreeEnsemble ensemble) {
  Ranker ranker;
  ranker.algorithm_ = Algorithm::kLambdaMart;
  ranker.ensemble_ = std::move(ensemble);
  return ranker;
}

double Ranker::score(const RankFeatures& features) const {
  switch (algorithm_) {
    case Algorithm::kAdaRank: {
      double total = 0.0;
      for (const AdaRankStage& stage : adarank_stages_) {
        total += stage.alpha * static_cast<double>(stage.sign) *
                 features[static_cast<std::size_t>(stage.feature)];
      }
      return total;
    }
    case Algorithm::kRankBoost: {
      double total = 0.0;
      for (const RankBoostStage& stage : rankboost_stages_) {
        if (features[static_cast<std::size_t>(stage.feature)] > stage.threshold) {
          total += stage.alpha;
        }
      }
      return total;
    }
    case Algorithm::kLambdaMart:
      return ensemble_.predict_raw(
          std::vector<double>(features.begin(), features.end()));
  }
  throw InternalError("unknown algorithm");
}

std::size_t Ranker::n_stages() const {
  switch (algorithm_) {
    case Algorithm::kAdaRank:
      return adarank_stages_.size();
    case Algorithm::kRankBoost:
      return rankboost_stages_.size();
    case Algorithm::kLambdaMart:
      return ensemble_.n_trees();
  }
  throw InternalError("unknown algorithm");
}

void TrainOptions::validate() const {
  require(adarank_max_rounds >= 1, "train: adarank_max_rounds must be >= 1");
  require(rankboost_rounds >= 1, "train: rankboost_rounds must be >= 1");
  require(rankboost_max_thresholds >= 1, "train: rankboost_max_thresholds must be >= 1");
  lambdamart.validate();
  require(ndcg_k >= 1, "train: ndcg_k must be >= 1");
}

namespace {

std::vector<double> score_all(const std::vector<RankingInstance>& instances,
                              const Ranker& ranker) {
  std::vector<double> scores;
  scores.reserve(instances.size());
  for (const RankingInstance& instance : instances) {
    scores.push_back(ranker.score(instance.features));
  }
  return scores;
}

// Index of the best validation value; earliest on ties. n_kept = index + 1.
std::size_t best_prefix(const std::vector<double>& validation_curve) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < validation_curve.size(); ++i) {
    if (validation_curve[i] > validation_curve[best]) best = i;
  }
  return best;
}

struct ValidationTracker {
  const std::vector<RankingInstance>* instances = nullptr;
  std::vector<QueryGroup> groups;
  std::vector<double> scores;
  std::vector<double> curve;
  std::size_t k = 10;

  explicit operator bool() const { return instances != nullptr; }

  void init(const std::vector<RankingInstance>* validation, std::size_t ndcg_k) {
    if (validation == nullptr || validation->empty()) return;
    instances = validation;
    groups = group_by_query(*validation);
    scores.assign(validation->size(), 0.0);
    k = ndcg_k;
  }

  void record() {
    curve.push_back(macro_ndcg(*instances, groups, scores, k));
  }
};

Ranker train_adarank(const std::vector<RankingInstance>& train,
                     const TrainOptions& options,
                     const std::vector<RankingInstance>* validation) {
  const std::vector<QueryGroup> groups = group_by_query(train);
  const std::size_t nq = groups.size();
  const auto k = static_cast<std::size_t>(options.ndcg_k);

  // Candidate weak rankers: one feature, either direction.
  struct Candidate {
    int feature;
    int sign;
  };
  std::vector<Candidate> candidates;
  for (int f = 0; f < static_cast<int>(kRankFeatureCount); ++f) {
    candidates.push_back({f, +1});
    candidates.push_back({f, -1});
  }

  // Per-candidate, per-query NDCG of ranking by the bare feature.
  std::vector<std::vector<double>> perf(candidates.size(), std::vector<double>(nq, 0.0));
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::vector<double> scores(train.size(), 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      scores[i] = static_cast<double>(candidates[c].sign) *
                  train[i].features[static_cast<std::size_t>(candidates[c].feature)];
    }
    for (std::size_t q = 0; q < nq; ++q) {
      perf[c][q] = query_ndcg(train, groups[q], scores, k);
    }
  }

  std::vector<double> weights(nq, 1.0 / static_cast<double>(nq));
  std::vector<double> model_scores(train.size(), 0.0);
  std::vector<AdaRankStage> stages;
  ValidationTracker tracker;
  tracker.init(validation, k);

  for (int round = 0; round < options.adarank_max_rounds; ++round) {
    std::size_t best = 0;
    double best_weighted = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      double weighted = 0.0;
      for (std::size_t q = 0; q < nq; ++q) weighted += weights[q] * perf[c][q];
      if (weighted > best_weighted) {
        best_weighted = weighted;
        best = c;
      }
    }
    // A weak ranker no better than the midpoint cannot help anymore.
    if (best_weighted <= 0.5) break;

    double agree = 0.0, disagree = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      agree += weights[q] * (1.0 + perf[best][q]);
      disagree += weights[q] * (1.0 - perf[best][q]);
    }
    const double alpha = 0.5 * std::log((agree + kEps) / (disagree + kEps));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) break;

    const AdaRankStage stage{candidates[best].feature, candidates[best].sign, alpha};
    stages.push_back(stage);
    for (std::size_t i = 0; i < train.size(); ++i) {
      model_scores[i] += alpha * static_cast<double>(stage.sign) *
                         train[i].features[static_cast<std::size_t>(stage.feature)];
    }
    if (tracker) {
      for (std::size_t i = 0; i < tracker.instances->size(); ++i) {
        tracker.scores[i] += alpha * static_cast<double>(stage.sign) *
                             (*tracker.instances)[i]
                                 .features[static_cast<std::size_t>(stage.feature)];
      }
      tracker.record();
    }

    // Re-weight queries: badly ranked ones get emphasis next round.
    double total = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      weights[q] = std::exp(-query_ndcg(train, groups[q], model_scores, k));
      total += weights[q];
    }
    for (double& w : weights) w /= total;
  }

  if (tracker && !tracker.curve.empty()) {
    stages.resize(best_prefix(tracker.curve) + 1);
  }
  return Ranker::adarank(std::move(stages));
}

// Candidate thresholds per feature: midpoints between consecutive distinct
// training values, thinned evenly to the cap.
std::vector<std::vector<double>> rankboost_thresholds(
    const std::vector<RankingInstance>& train, int cap) {
  std::vector<std::vector<double>> thresholds(kRankFeatureCount);
  for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
    std::vector<double> values;
    values.reserve(train.size());
    for (const RankingInstance& instance : train) values.push_back(instance.features[f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<double> midpoints;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      midpoints.push_back(0.5 * (values[i] + values[i + 1]));
    }
    if (midpoints.size() > static_cast<std::size_t>(cap)) {
      std::vector<double> thinned;
      thinned.reserve(static_cast<std::size_t>(cap));
      const double step =
          static_cast<double>(midpoints.size()) / static_cast<double>(cap);
      for (int i = 0; i < cap; ++i) {
        thinned.push_back(
            midpoints[static_cast<std::size_t>((static_cast<double>(i) + 0.5) * step)]);
      }
      midpoints = std::move(thinned);
    }
    // Descending order suits the sweep that accumulates docs above theta.
    std::reverse(midpoints.begin(), midpoints.end());
    thresholds[f] = std::move(midpoints);
  }
  return thresholds;
}

Ranker train_rankboost(const std::vector<RankingInstance>& train,
                       const TrainOptions& options,
                       const std::vector<RankingInstance>* validation) {
  const std::vector<QueryGroup> groups = group_by_query(train);
  const std::vector<std::vector<double>> thresholds =
      rankboost_thresholds(train, options.rankboost_max_thresholds);

  // Per query: docs bucketed by relevance grade, and per feature the rows
  // sorted by feature value descending (precomputed once).
  struct QueryLayout {
    std::vector<int> grades;                       // ascending distinct grades
    std::vector<std::size_t> grade_of_row;         // bucket index per row slot
    std::array<std::vector<std::size_t>, kRankFeatureCount> by_feature;  // row slots
  };
  std::vector<QueryLayout> layouts(groups.size());
  for (std::size_t q = 0; q < groups.size(); ++q) {
    const QueryGroup& group = groups[q];
    QueryLayout& layout = layouts[q];
    std::set<int> grades;
    for (std::size_t row : group.rows) grades.insert(train[row].relevance);
    layout.grades.assign(grades.begin(), grades.end());
    layout.grade_of_row.resize(group.rows.size());
    for (std::size_t slot = 0; slot < group.rows.size(); ++slot) {
      const int rel = train[group.rows[slot]].relevance;
      layout.grade_of_row[slot] = static_cast<std::size_t>(
          std::lower_bound(layout.grades.begin(), layout.grades.end(), rel) -
          layout.grades.begin());
    }
    for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
      std::vector<std::size_t>& order = layout.by_feature[f];
      order.resize(group.rows.size());
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return train[group.rows[a]].features[f] > train[group.rows[b]].features[f];
      });
    }
  }

  std::vector<double> model_scores(train.size(), 0.0);
  std::vector<RankBoostStage> stages;
  ValidationTracker tracker;
  tracker.init(validation, static_cast<std::size_t>(options.ndcg_k));

  for (int round = 0; round < options.rankboost_rounds; ++round) {
    // r[f][t]: weighted preference correlation of the learner 1[x_f > theta].
    std::array<std::vector<double>, kRankFeatureCount> r;
    for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
      r[f].assign(thresholds[f].size(), 0.0);
    }
    double z = 0.0;

    for (std::size_t q = 0; q < groups.size(); ++q) {
      const QueryGroup& group = groups[q];
      const QueryLayout& layout = layouts[q];
      if (layout.grades.size() < 2) continue;
      const std::size_t n = group.rows.size();
      const std::size_t n_grades = layout.grades.size();

      // Pair weight factorization: weight(lo i, hi j) = lo_w[i] * hi_w[j].
      // Scores are mean-shifted per query before exponentiating.
      double mean = 0.0;
      for (std::size_t slot = 0; slot < n; ++slot) {
        mean += model_scores[group.rows[slot]];
      }
      mean /= static_cast<double>(n);
      std::vector<double> lo_w(n), hi_w(n);
      std::vector<double> bucket_lo(n_grades, 0.0), bucket_hi(n_grades, 0.0);
      for (std::size_t slot = 0; slot < n; ++slot) {
        const double shifted = model_scores[group.rows[slot]] - mean;
        lo_w[slot] = std::exp(shifted);
        hi_w[slot] = std::exp(-shifted);
        bucket_lo[layout.grade_of_row[slot]] += lo_w[slot];
        bucket_hi[layout.grade_of_row[slot]] += hi_w[slot];
      }
      for (std::size_t lo = 0; lo < n_grades; ++lo) {
        for (std::size_t hi = lo + 1; hi < n_grades; ++hi) {
          z += bucket_lo[lo] * bucket_hi[hi];
        }
      }

      for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
        const std::vector<std::size_t>& order = layout.by_feature[f];
        std::vector<double> above_lo(n_grades, 0.0), above_hi(n_grades, 0.0);
        std::size_t pointer = 0;
        for (std::size_t t = 0; t < thresholds[f].size(); ++t) {
          const double theta = thresholds[f][t];
          while (pointer < n &&
                 train[group.rows[order[pointer]]].features[f] > theta) {
            const std::size_t slot = order[pointer];
            above_lo[layout.grade_of_row[slot]] += lo_w[slot];
            above_hi[layout.grade_of_row[slot]] += hi_w[slot];
            ++pointer;
          }
          double contrib = 0.0;
          for (std::size_t lo = 0; lo < n_grades; ++lo) {
            for (std::size_t hi = lo + 1; hi < n_grades; ++hi) {
              contrib += bucket_lo[lo] * above_hi[hi] - above_lo[lo] * bucket_hi[hi];
            }
          }
          r[f][t] += contrib;
        }
      }
    }
    require(z > 0.0, "rankboost: no ordered pairs in the training data");

    std::size_t best_f = 0, best_t = 0;
    double best_r = 0.0;
    for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
      for (std::size_t t = 0; t < thresholds[f].size(); ++t) {
        if (std::fabs(r[f][t]) > std::fabs(best_r)) {
          best_r = r[f][t];
          best_f = f;
          best_t = t;
        }
      }
    }
    const double r_norm = std::clamp(best_r / z, -1.0 + kEps, 1.0 - kEps);
    if (std::fabs(r_norm) < 1e-12) break;
    const double alpha = 0.5 * std::log((1.0 + r_norm) / (1.0 - r_norm));

    const RankBoostStage stage{static_cast<int>(best_f), thresholds[best_f][best_t],
                               alpha};
    stages.push_back(stage);
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train[i].features[best_f] > stage.threshold) model_scores[i] += alpha;
    }
    if (tracker) {
      for (std::size_t i = 0; i < tracker.instances->size(); ++i) {
        if ((*tracker.instances)[i].features[best_f] > stage.threshold) {
          tracker.scores[i] += alpha;
        }
      }
      tracker.record();
    }
  }

  if (tracker && !tracker.curve.empty()) {
    stages.resize(best_prefix(tracker.curve) + 1);
  }
  return Ranker::rankboost(std::move(stages));
}

Ranker train_lambdamart(const std::vector<RankingInstance>& train,
                        const TrainOptions& options,
                        const std::vector<RankingInstance>* validation) {
  const std::vector<QueryGroup> groups = group_by_query(train);
  const std::size_t n = train.size();

  boosting::FeatureMatrix x(n, kRankFeatureCount);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
      x.set(i, f, train[i].features[f]);
    }
  }

  // Full-list ideal DCG per query for the swap deltas.
  std::vector<double> idcg(groups.size(), 0.0);
  for (std::size_t q = 0; q < groups.size(); ++q) {
    std::vector<int> rels;
    for (std::size_t row : groups[q].rows) rels.push_back(train[row].relevance);
    std::sort(rels.begin(), rels.end(), std::greater<int>());
    idcg[q] = dcg_at_k(rels, rels.size());
  }

  boosting::BoostParams params = options.lambdamart;
  params.seed = Rng::mix(options.seed, 0x1a3bda17u);
  Rng subsample_rng(params.seed);

  std::vector<double> scores(n, 0.0);
  std::vector<double> grad(n), hess(n);
  std::vector<boosting::RegressionTree> trees;
  ValidationTracker tracker;
  tracker.init(validation, static_cast<std::size_t>(options.ndcg_k));

  for (int round = 0; round < params.n_trees; ++round) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    for (std::size_t q = 0; q < groups.size(); ++q) {
      const QueryGroup& group = groups[q];
      if (idcg[q] <= 0.0) continue;
      const std::vector<std::size_t> order = ranked_rows(train, group.rows, scores);
      std::vector<double> discount(order.size());
      for (std::size_t pos = 0; pos < order.size(); ++pos) {
        discount[pos] = log2_discount(pos + 1);
      }
      for (std::size_t a = 0; a < order.size(); ++a) {
        for (std::size_t b = 0; b < order.size(); ++b) {
          const std::size_t i = order[a];
          const std::size_t j = order[b];
          if (train[i].relevance <= train[j].relevance) continue;
          const double score_diff = scores[i] - scores[j];
          const double rho = boosting::sigmoid(-score_diff);
          const double delta = std::fabs((gain(train[i].relevance) -
                                          gain(train[j].relevance)) *
                                         (discount[a] - discount[b])) /
                               idcg[q];
          grad[i] += rho * delta;
          grad[j] -= rho * delta;
          const double curvature = std::max(delta * rho * (1.0 - rho), 1e-16);
          hess[i] += curvature;
          hess[j] += curvature;
        }
      }
    }

    std::vector<std::uint32_t> rows;
    if (params.subsample >= 1.0) {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), 0u);
    } else {
      rows.resize(n);
      std::iota(rows.begin(), rows.end(), 0u);
      subsample_rng.shuffle(rows);
      rows.resize(std::max<std::size_t>(
          1, static_cast<std::size_t>(params.subsample * static_cast<double>(n))));
      std::sort(rows.begin(), rows.end());
    }
    boosting::RegressionTree tree = boosting::fit_tree(x, grad, hess, rows, params);
    tree.scale(params.learning_rate);
    for (std::size_t i = 0; i < n; ++i) scores[i] += tree.predict(x, i);
    if (tracker) {
      for (std::size_t i = 0; i < tracker.instances->size(); ++i) {
        tracker.scores[i] += tree.predict(std::vector<double>(
            (*tracker.instances)[i].features.begin(),
            (*tracker.instances)[i].features.end()));
      }
      tracker.record();
    }
    trees.push_back(std::move(tree));
  }

  if (tracker && !tracker.curve.empty()) {
    trees.resize(best_prefix(tracker.curve) + 1);
  }

  // Assemble through serialization to reuse the ensemble invariants.
  nlohmann::json ensemble_json = boosting::TreeEnsemble().to_json();
  ensemble_json["n_features"] = kRankFeatureCount;
  ensemble_json["base_score"] = 0.0;
  nlohmann::json trees_json = nlohmann::json::array();
  for (const boosting::RegressionTree& tree : trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const boosting::TreeNode& node : tree.nodes()) {
      nodes.push_back({{"feature", node.feature},
                       {"threshold", node.threshold},
                       {"left", node.left},
                       {"right", node.right},
                       {"value", node.value}});
    }
    trees_json.push_back({{"nodes", std::move(nodes)}});
  }
  ensemble_json["trees"] = std::move(trees_json);
  return Ranker::lambdamart(boosting::TreeEnsemble::from_json(ensemble_json));
}

}  // namespace

Ranker train_ranker(const std::vector<RankingInstance>& train,
                    const TrainOptions& options,
                    const std::vector<RankingInstance>* validation) {
  options.validate();
  require(!train.empty(), "train_ranker: no training instances");
  switch (options.algorithm) {
    case Algorithm::kAdaRank:
      return train_adarank(train, options, validation);
    case Algorithm::kRankBoost:
      return train_rankboost(train, options, validation);
    case Algorithm::kLambdaMart:
      return train_lambdamart(train, options, validation);
  }
  throw InternalError("unknown algorithm");
}

void IntentConditionalRanker::set_ranker(taxonomy::Intent intent, Ranker ranker) {
  rankers_.insert_or_assign(intent, std::move(ranker));
}

bool IntentConditionalRanker::has_ranker(taxonomy::Intent intent) const {
  return rankers_.count(intent) > 0;
}

const Ranker& IntentConditionalRanker::ranker(taxonomy::Intent intent) const {
  const auto it = rankers_.find(intent);
  require(it != rankers_.end(), "no ranker for intent " +
                                    std::string(taxonomy::code(intent)));
  return it->second;
}

double IntentConditionalRanker::score(taxonomy::Intent intent,
                                      const RankFeatures& features) const {
  return ranker(intent).score(features);
}

double IntentConditionalRanker::score_mixture(const std::array<double, 5>& intent_probs,
                                              const RankFeatures& features) const {
  double total_prob = 0.0;
  for (double p : intent_probs) {
    require(p >= 0.0, "intent probabilities must be non-negative");
    total_prob += p;
  }
  require(std::fabs(total_prob - 1.0) <= 1e-9, "intent probabilities must sum to 1");
  double score = 0.0;
  for (std::size_t i = 0; i < intent_probs.size(); ++i) {
    if (intent_probs[i] == 0.0) continue;
    score += intent_probs[i] * ranker(static_cast<taxonomy::Intent>(i)).score(features);
  }
  return score;
}

std::vector<RankingInstance> labels_from_clicks(
    const std::vector<logs::Session>& sessions, const text::Corpus& corpus,
    const std::vector<taxonomy::Intent>& allowed_intents, const text::Bm25Params& bm25,
    const text::TokenizerOptions& tokenizer, LabelingStats* stats) {
  require(!allowed_intents.empty(), "labels_from_clicks: empty intent filter");
  const std::set<taxonomy::Intent> allowed(allowed_intents.begin(),
                                           allowed_intents.end());
  LabelingStats local;
  std::vector<RankingInstance> instances;

  for (const logs::Session& session : sessions) {
    std::optional<taxonomy::Intent> intent;
    if (session.intent) intent = taxonomy::as_intent(session.intent->value);
    if (!intent || allowed.count(*intent) == 0) {
      local.dropped_intent += session.queries.size();
      continue;
    }
    for (std::size_t q = 0; q < session.queries.size(); ++q) {
      const logs::QueryUnit& unit = session.queries[q];
      const std::vector<std::string> terms = text::tokenize(unit.query_text, tokenizer);
      if (unit.impressions.empty() || terms.empty()) {
        ++local.dropped_no_impressions;
        continue;
      }
      if (unit.clicks.empty()) {
        ++local.dropped_no_clicks;
        continue;
      }
      std::set<int> clicked;
      for (const logs::Click& click : unit.clicks) clicked.insert(click.rank);
      bool any_relevant = false;
      for (const auto& [rank, doc_id] : unit.impressions) {
        if (clicked.count(rank) > 0) any_relevant = true;
      }
      if (!any_relevant) {
        // Clicks that fall outside the recorded impressions carry no label.
        ++local.dropped_no_clicks;
        continue;
      }
      const std::string query_id = session.session_id + "-q" + std::to_string(q + 1);
      for (const auto& [rank, doc_id] : unit.impressions) {
        RankingInstance instance;
        instance.query_id = query_id;
        instance.session_id = session.session_id;
        instance.doc_id = doc_id;
        instance.features =
            text::content_features(terms, doc_id, corpus, bm25).as_array();
        instance.relevance = clicked.count(rank) > 0 ? 1 : 0;
        instance.intent = *intent;
        instances.push_back(std::move(instance));
      }
      ++local.queries_kept;
    }
  }
  if (stats) *stats = local;
  return instances;
}

void CvOptions::validate() const {
  require(n_folds >= 2, "cross_validate: need at least two folds");
  require(validation_fraction >= 0.0 && validation_fraction < 1.0,
          "cross_validate: validation_fraction must lie in [0, 1)");
}

namespace {

struct SessionInfo {
  std::string session_id;
  taxonomy::Intent intent = taxonomy::Intent::kParticularCase;
};

// Deterministic fold id per session: shuffle within each intent stratum,
// then deal round-robin.
std::map<std::string, int> assign_session_folds(const std::vector<SessionInfo>& sessions,
                                                int n_folds, std::uint64_t seed) {
  std::map<taxonomy::Intent, std::vector<std::string>> strata;
  for (const SessionInfo& info : sessions) {
    strata[info.intent].push_back(info.session_id);
  }
  Rng rng(Rng::mix(seed, 0xf01d5u));
  std::map<std::string, int> fold_of;
  for (auto& [intent, stratum] : strata) {
    (void)intent;
    rng.shuffle(stratum);
    for (std::size_t i = 0; i < stratum.size(); ++i) {
      fold_of[stratum[i]] = static_cast<int>(i % static_cast<std::size_t>(n_folds));
    }
  }
  return fold_of;
}

RankMetrics macro_metrics(const std::vector<RankMetrics>& per_query) {
  RankMetrics mean;
  for (const RankMetrics& m : per_query) {
    mean.ndcg5 += m.ndcg5;
    mean.ndcg10 += m.ndcg10;
    mean.ndcg15 += m.ndcg15;
    mean.map += m.map;
  }
  const double n = static_cast<double>(per_query.size());
  mean.ndcg5 /= n;
  mean.ndcg10 /= n;
  mean.ndcg15 /= n;
  mean.map /= n;
  return mean;
}

}  // namespace

CvResult cross_validate(const std::vector<RankingInstance>& instances,
                        const TrainOptions& train_options, const CvOptions& cv_options) {
  train_options.validate();
  cv_options.validate();
  const std::vector<QueryGroup> groups = group_by_query(instances);

  // Sessions in first-appearance order with a consistent intent.
  std::vector<SessionInfo> sessions;
  std::map<std::string, taxonomy::Intent> intent_of;
  for (const QueryGroup& group : groups) {
    auto [it, inserted] = intent_of.try_emplace(group.session_id, group.intent);
    if (inserted) {
      sessions.push_back({group.session_id, group.intent});
    } else {
      require(it->second == group.intent,
              "session " + group.session_id + " carries conflicting intents");
    }
  }
  require(sessions.size() >= static_cast<std::size_t>(cv_options.n_folds),
          "cross_validate: fewer sessions than folds");

  const std::map<std::string, int> fold_of =
      assign_session_folds(sessions, cv_options.n_folds, cv_options.seed);

  std::vector<RankMetrics> all_query_metrics;
  CvResult result;
  for (int fold = 0; fold < cv_options.n_folds; ++fold) {
    // Partition sessions, then carve the validation split off the training
    // sessions per intent stratum.
    std::map<taxonomy::Intent, std::vector<std::string>> train_strata;
    std::set<std::string> test_sessions;
    for (const SessionInfo& info : sessions) {
      if (fold_of.at(info.session_id) == fold) {
        test_sessions.insert(info.session_id);
      } else {
        train_strata[info.intent].push_back(info.session_id);
      }
    }
    require(!test_sessions.empty(),
            "cross_validate: fold " + std::to_string(fold) + " has no sessions");

    std::set<std::string> validation_sessions;
    if (cv_options.validation_fraction > 0.0) {
      Rng rng(Rng::mix(cv_options.seed, 0xa110c8u + static_cast<std::uint64_t>(fold)));
      for (auto& [intent, stratum] : train_strata) {
        (void)intent;
        rng.shuffle(stratum);
        const auto n_val = static_cast<std::size_t>(
            std::floor(cv_options.validation_fraction *
                       static_cast<double>(stratum.size())));
        for (std::size_t i = 0; i < n_val && stratum.size() - i > 1; ++i) {
          validation_sessions.insert(stratum[i]);
        }
      }
    }

    std::vector<RankingInstance> train_set, validation_set, test_set;
    for (const RankingInstance& instance : instances) {
      if (test_sessions.count(instance.session_id) > 0) {
        test_set.push_back(instance);
      } else if (validation_sessions.count(instance.session_id) > 0) {
        validation_set.push_back(instance);
      } else {
        train_set.push_back(instance);
      }
    }
    require(!train_set.empty(), "cross_validate: empty training split");

    std::vector<double> test_scores(test_set.size(), 0.0);
    if (!cv_options.intent_aware) {
      const Ranker ranker =
          train_ranker(train_set, train_options,
                       validation_set.empty() ? nullptr : &validation_set);
      test_scores = score_all(test_set, ranker);
    } else {
      IntentConditionalRanker conditional;
      for (taxonomy::Intent intent : taxonomy::kAllIntents) {
        std::vector<RankingInstance> sub_train, sub_validation;
        for (const RankingInstance& instance : train_set) {
          if (instance.intent == intent) sub_train.push_back(instance);
        }
        for (const RankingInstance& instance : validation_set) {
          if (instance.intent == intent) sub_validation.push_back(instance);
        }
        if (sub_train.empty()) continue;
        conditional.set_ranker(
            intent, train_ranker(sub_train, train_options,
                                 sub_validation.empty() ? nullptr : &sub_validation));
      }
      for (std::size_t i = 0; i < test_set.size(); ++i) {
        test_scores[i] = conditional.score(test_set[i].intent, test_set[i].features);
      }
    }

    const std::vector<QueryGroup> test_groups = group_by_query(test_set);
    std::vector<RankMetrics> fold_metrics;
    for (const QueryGroup& group : test_groups) {
      const std::vector<int> rels = ranked_rels(test_set, group.rows, test_scores);
      RankMetrics m;
      m.ndcg5 = ndcg_at_k(rels, 5);
      m.ndcg10 = ndcg_at_k(rels, 10);
      m.ndcg15 = ndcg_at_k(rels, 15);
      m.map = average_precision(rels);
      fold_metrics.push_back(m);
      all_query_metrics.push_back(m);
    }
    result.per_fold.push_back(macro_metrics(fold_metrics));
  }
  result.mean = macro_metrics(all_query_metrics);
  result.n_queries = all_query_metrics.size();
  return result;
}

std::vector<RankingInstance> read_instances_jsonl(std::istream& in) {
  std::vector<RankingInstance> instances;
  jsonl::for_each_record(in, [&](const nlohmann::json& record, std::size_t line_no) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    for (const char* field : {"query_id", "session_id", "doc_id", "intent"}) {
      require(record.contains(field) && record[field].is_string(),
              where + "instance needs a string '" + field + "'");
    }
    require(record.contains("relevance") && record["relevance"].is_number_integer(),
            where + "instance needs an integer 'relevance'");
    require(record.contains("features") && record["features"].is_array() &&
                record["features"].size() == kRankFeatureCount,
            where + "instance needs a 'features' array of length 5");
    RankingInstance instance;
    instance.query_id = record["query_id"].get<std::string>();
    instance.session_id = record["session_id"].get<std::string>();
    instance.doc_id = record["doc_id"].get<std::string>();
    instance.relevance = record["relevance"].get<int>();
    require(instance.relevance >= 0, where + "relevance must be non-negative");
    instance.intent = taxonomy::parse_intent(record["intent"].get<std::string>());
    for (std::size_t f = 0; f < kRankFeatureCount; ++f) {
      instance.features[f] = record["features"][f].get<double>();
    }
    instances.push_back(std::move(instance));
  });
  return instances;
}

void write_instances_jsonl(std::ostream& out,
                           const std::vector<RankingInstance>& instances) {
  for (const RankingInstance& instance : instances) {
    nlohmann::json record;
    record["query_id"] = instance.query_id;
    record["session_id"] = instance.session_id;
    record["doc_id"] = instance.doc_id;
    record["relevance"] = instance.relevance;
    record["intent"] = std::string(taxonomy::code(instance.intent));
    record["features"] = instance.features;
    out << record.dump() << "\n";
  }
}

}  // namespace intentir::ltr
