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

// End-to-end acceptance harness. Each criterion prints exactly one PASS or
// FAIL line and the binary exits nonzero when any selected criterion fails.
// Run with a criterion number (1..9) to check one criterion, or with no
// arguments to check all of them.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "intentir/behavior_metrics.hpp"
#include "intentir/boosting.hpp"
#include "intentir/ltr.hpp"
#include "intentir/reports.hpp"
#include "intentir/rng.hpp"
#include "intentir/satisfaction.hpp"
#include "intentir/session_log.hpp"
#include "intentir/stats.hpp"
#include "intentir/synthgen.hpp"
#include "intentir/taxonomy.hpp"

namespace {

using intentir::Rng;
namespace logs = intentir::logs;
namespace ltr = intentir::ltr;
namespace metrics = intentir::metrics;
namespace reports = intentir::reports;
namespace sat = intentir::sat;
namespace stats = intentir::stats;
namespace synth = intentir::synth;
namespace taxonomy = intentir::taxonomy;
namespace boosting = intentir::boosting;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt2(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string fmt4(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

std::string fmt_exp(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

// ---------------------------------------------------------------------------
// Criterion 1: ranking metrics, AUC and reciprocal ranks against brute-force
// re-implementations on random small cases.

double brute_dcg(const std::vector<int>& rels, std::size_t k) {
  double dcg = 0.0;
  for (std::size_t i = 0; i < rels.size() && i < k; ++i) {
    dcg += (std::pow(2.0, rels[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

double brute_ndcg(std::vector<int> rels_ranked, std::size_t k) {
  const double dcg = brute_dcg(rels_ranked, k);
  std::sort(rels_ranked.begin(), rels_ranked.end(), std::greater<int>());
  const double ideal = brute_dcg(rels_ranked, k);
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

double brute_ap(const std::vector<int>& rels_ranked) {
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < rels_ranked.size(); ++i) {
    if (rels_ranked[i] > 0) {
      hits += 1.0;
      sum += hits / static_cast<double>(i + 1);
    }
  }
  return hits > 0.0 ? sum / hits : 0.0;
}

Outcome criterion_metric_oracles() {
  Rng rng(101);
  double worst = 0.0;
  const auto track = [&](double a, double b) { worst = std::max(worst, std::fabs(a - b)); };

  for (int trial = 0; trial < 1000; ++trial) {
    // Ranked list with deliberate score ties, evaluated both ways.
    const int n_docs = static_cast<int>(rng.uniform_int(2, 8));
    std::vector<ltr::RankingInstance> instances;
    std::vector<double> scores;
    std::vector<int> rels;
    for (int d = 0; d < n_docs; ++d) {
      ltr::RankingInstance instance;
      instance.query_id = "q1";
      instance.session_id = "s1";
      instance.doc_id = "d" + std::to_string(d);
      instance.relevance = static_cast<int>(rng.uniform_int(0, 2));
      rels.push_back(instance.relevance);
      instances.push_back(std::move(instance));
      double score = rng.uniform();
      if (d > 0 && rng.uniform() < 0.3) {
        score = scores[static_cast<std::size_t>(rng.uniform_int(0, d - 1))];
      }
      scores.push_back(score);
    }
    const ltr::RankMetrics got = ltr::evaluate_ranking(instances, scores);

    std::vector<int> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return instances[a].doc_id < instances[b].doc_id;
    });
    std::vector<int> ranked;
    for (int index : order) ranked.push_back(rels[index]);
    track(got.ndcg5, brute_ndcg(ranked, 5));
    track(got.ndcg10, brute_ndcg(ranked, 10));
    track(got.ndcg15, brute_ndcg(ranked, 15));
    track(got.map, brute_ap(ranked));

    // AUC by explicit pair enumeration, ties worth one half.
    const int n_points = static_cast<int>(rng.uniform_int(4, 40));
    std::vector<int> labels;
    std::vector<double> points;
    for (int i = 0; i < n_points; ++i) {
      labels.push_back(static_cast<int>(rng.uniform_int(0, 1)));
      double score = rng.uniform();
      if (i > 0 && rng.uniform() < 0.3) {
        score = points[static_cast<std::size_t>(rng.uniform_int(0, i - 1))];
      }
      points.push_back(score);
    }
    labels[0] = 1;
    labels[1] = 0;
    double pair_sum = 0.0;
    double n_pairs = 0.0;
    for (std::size_t p = 0; p < labels.size(); ++p) {
      if (labels[p] != 1) continue;
      for (std::size_t q = 0; q < labels.size(); ++q) {
        if (labels[q] != 0) continue;
        n_pairs += 1.0;
        if (points[p] > points[q]) {
          pair_sum += 1.0;
        } else if (points[p] == points[q]) {
          pair_sum += 0.5;
        }
      }
    }
    track(stats::roc_auc(labels, points), pair_sum / n_pairs);

    // Reciprocal ranks straight from the click list; every fifth unit has no
    // clicks, where all three must be exactly zero.
    logs::QueryUnit unit;
    unit.query_text = "alpha beta";
    unit.start_timestamp = 0;
    unit.end_timestamp = 90000;
    if (trial % 5 != 0) {
      const int n_clicks = static_cast<int>(rng.uniform_int(1, 6));
      std::int64_t ts = 1000;
      for (int c = 0; c < n_clicks; ++c) {
        logs::Click click;
        click.rank = static_cast<int>(rng.uniform_int(1, 10));
        click.timestamp = ts;
        click.dwell_seconds = rng.uniform(0.0, 60.0);
        ts += 1000;
        unit.clicks.push_back(click);
      }
    }
    const metrics::MeasureVector online = metrics::online_metrics(unit);
    double max_rr = 0.0, min_rr = 0.0, mean_rr = 0.0;
    if (!unit.clicks.empty()) {
      int lo = unit.clicks.front().rank, hi = unit.clicks.front().rank;
      double sum_rr = 0.0;
      for (const logs::Click& click : unit.clicks) {
        lo = std::min(lo, click.rank);
        hi = std::max(hi, click.rank);
        sum_rr += 1.0 / static_cast<double>(click.rank);
      }
      max_rr = 1.0 / static_cast<double>(lo);
      min_rr = 1.0 / static_cast<double>(hi);
      mean_rr = sum_rr / static_cast<double>(unit.clicks.size());
    }
    track(online.get("max_rr").value(), max_rr);
    track(online.get("min_rr").value(), min_rr);
    track(online.get("mean_rr").value(), mean_rr);
  }

  Outcome out;
  out.pass = worst <= 1e-9;
  out.detail = "1000 cases, max |delta| " + fmt_exp(worst) + " vs tolerance 1e-9";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: hand-computed statistical fixtures at 1e-9 plus Monte-Carlo
// null rejection rates for Kruskal-Wallis and ANOVA.

Outcome criterion_stat_fixtures() {
  double worst = 0.0;
  const auto track = [&](double a, double b) { worst = std::max(worst, std::fabs(a - b)); };

  const stats::TestResult kw = stats::kruskal_wallis(
      {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}});
  track(kw.statistic, 7.2);
  track(kw.p_value, std::exp(-3.6));

  const stats::TestResult anova = stats::anova_oneway({{1.0, 2.0}, {5.0, 6.0}});
  track(anova.statistic, 32.0);
  track(anova.p_value, 1.0 - std::sqrt(32.0 / 34.0));

  const stats::TestResult pearson =
      stats::pearson_correlation({1.0, 2.0, 3.0, 4.0}, {1.0, 3.0, 2.0, 4.0});
  track(pearson.statistic, 0.8);
  track(pearson.p_value, 0.2);

  track(stats::fleiss_kappa({{2, 1}}), -0.5);
  track(stats::fleiss_kappa({{3, 0}, {0, 3}}), 1.0);

  const std::vector<double> holm = stats::holm_bonferroni({0.01, 0.02, 0.04});
  track(holm[0], 0.03);
  track(holm[1], 0.04);
  track(holm[2], 0.04);

  track(stats::roc_auc({1, 0, 1, 0}, {0.9, 0.8, 0.7, 0.1}), 0.75);
  track(stats::roc_auc({1, 0}, {0.5, 0.5}), 0.5);

  // Null calibration: 3 standard-normal groups of 1000 per trial; rejection
  // rates at alpha = 0.05 must land in [0.03, 0.07] over 200 trials.
  int kw_rejections = 0;
  int anova_rejections = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(Rng::mix(202, static_cast<std::uint64_t>(trial)));
    std::vector<std::vector<double>> groups(3);
    for (std::vector<double>& group : groups) {
      group.reserve(1000);
      for (int i = 0; i < 1000; ++i) group.push_back(rng.normal());
    }
    if (stats::kruskal_wallis(groups).p_value < 0.05) ++kw_rejections;
    if (stats::anova_oneway(groups).p_value < 0.05) ++anova_rejections;
  }
  const double kw_rate = kw_rejections / 200.0;
  const double anova_rate = anova_rejections / 200.0;
  const bool rates_ok = kw_rate >= 0.03 && kw_rate <= 0.07 && anova_rate >= 0.03 &&
                        anova_rate <= 0.07;

  Outcome out;
  out.pass = worst <= 1e-9 && rates_ok;
  out.detail = "fixtures max |delta| " + fmt_exp(worst) + ", null rejection kw " +
               std::to_string(kw_rejections) + "/200 anova " +
               std::to_string(anova_rejections) + "/200 within [0.03, 0.07]";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: exhaustive three-annotator aggregation against an independent
// oracle over all 343 label triples.

taxonomy::AnnotatorLabel oracle_aggregate(const std::vector<taxonomy::AnnotatorLabel>& votes) {
  std::map<taxonomy::Label, std::size_t> counts;
  for (const taxonomy::AnnotatorLabel& vote : votes) ++counts[vote.value];
  const std::size_t threshold = (votes.size() + 1) / 2;

  std::size_t best_count = 0;
  for (const auto& [label, count] : counts) {
    (void)label;
    best_count = std::max(best_count, count);
  }
  std::vector<taxonomy::Label> at_best;
  for (const auto& [label, count] : counts) {
    if (count == best_count) at_best.push_back(label);
  }

  taxonomy::AnnotatorLabel result;
  if (at_best.size() == 1 && best_count >= threshold) {
    result.value = at_best.front();
    if (result.value == taxonomy::Label::kMulti) {
      std::set<taxonomy::Intent> pool;
      for (const taxonomy::AnnotatorLabel& vote : votes) {
        if (vote.value != taxonomy::Label::kMulti) continue;
        pool.insert(vote.potential_intents.begin(), vote.potential_intents.end());
      }
      result.potential_intents.assign(pool.begin(), pool.end());
    }
    return result;
  }

  std::set<taxonomy::Intent> pool;
  for (const taxonomy::AnnotatorLabel& vote : votes) {
    if (vote.value == taxonomy::Label::kMulti) {
      pool.insert(vote.potential_intents.begin(), vote.potential_intents.end());
    } else if (const auto intent = taxonomy::as_intent(vote.value)) {
      pool.insert(*intent);
    }
  }
  if (pool.size() == 1) {
    result.value = taxonomy::to_label(*pool.begin());
    return result;
  }
  result.value = taxonomy::Label::kMulti;
  result.potential_intents.assign(pool.begin(), pool.end());
  return result;
}

Outcome criterion_aggregation_exhaustive() {
  // Multi votes carry a slot-specific pool so unions across annotators are
  // exercised, not just duplicated sets.
  const std::array<std::vector<taxonomy::Intent>, 3> slot_pools = {
      std::vector<taxonomy::Intent>{taxonomy::Intent::kParticularCase,
                                    taxonomy::Intent::kCharacterization},
      std::vector<taxonomy::Intent>{taxonomy::Intent::kCharacterization,
                                    taxonomy::Intent::kPenalty},
      std::vector<taxonomy::Intent>{taxonomy::Intent::kParticularCase,
                                    taxonomy::Intent::kPenalty}};

  int checked = 0;
  int mismatches = 0;
  for (const taxonomy::Label a : taxonomy::kAllLabels) {
    for (const taxonomy::Label b : taxonomy::kAllLabels) {
      for (const taxonomy::Label c : taxonomy::kAllLabels) {
        taxonomy::AnnotationSet set;
        set.item_id = "item";
        const std::array<taxonomy::Label, 3> values = {a, b, c};
        for (std::size_t slot = 0; slot < values.size(); ++slot) {
          taxonomy::AnnotatorLabel vote;
          vote.value = values[slot];
          if (vote.value == taxonomy::Label::kMulti) {
            vote.potential_intents = slot_pools[slot];
          }
          set.labels.push_back(std::move(vote));
        }
        const taxonomy::AnnotatorLabel got = taxonomy::aggregate_majority(set);
        const taxonomy::AnnotatorLabel want = oracle_aggregate(set.labels);
        ++checked;
        if (got.value != want.value || got.potential_intents != want.potential_intents) {
          ++mismatches;
        }
      }
    }
  }

  Outcome out;
  out.pass = checked == 343 && mismatches == 0;
  out.detail = std::to_string(checked - mismatches) + "/" + std::to_string(checked) +
               " vote triples match the enumeration oracle";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: the session generator hits its calibrated measure targets, and
// group comparison flags exactly the deliberately shifted measures.

std::vector<logs::Session> generate_split(const synth::CalibratedProfile& profile,
                                          taxonomy::Intent intent, std::size_t n_sessions,
                                          std::uint64_t seed) {
  synth::SessionGenOptions options;
  options.n_sessions = n_sessions;
  options.intent_mix = {{intent, 1.0}};
  options.seed = seed;
  options.n_users = 25;
  const std::vector<logs::RawEvent> events =
      synth::generate_sessions({{intent, profile}}, options);
  return logs::split_sessions(events);
}

std::vector<metrics::MeasureVector> measure_all(const std::vector<logs::Session>& sessions,
                                                double satisfied_dwell_seconds) {
  std::vector<metrics::MeasureVector> vectors;
  vectors.reserve(sessions.size());
  for (const logs::Session& session : sessions) {
    vectors.push_back(metrics::session_measures(session, satisfied_dwell_seconds));
  }
  return vectors;
}

Outcome criterion_generator_calibration() {
  const std::map<taxonomy::Intent, synth::CalibratedProfile> profiles =
      synth::load_profiles_file(INTENTIR_PROFILES_PATH);

  double worst_rel = 0.0;
  std::string worst_name = "none";
  for (const auto& [intent, profile] : profiles) {
    const std::vector<logs::Session> sessions = generate_split(
        profile, intent, 500,
        Rng::mix(404, static_cast<std::uint64_t>(static_cast<int>(intent))));
    if (sessions.size() != 500) {
      return {false, "expected 500 sessions for " + std::string(taxonomy::code(intent)) +
                         ", got " + std::to_string(sessions.size())};
    }
    const std::vector<metrics::MeasureVector> vectors =
        measure_all(sessions, profile.anchors.satisfied_dwell_seconds);
    for (const std::string_view name : metrics::kSessionMeasureNames) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const metrics::MeasureVector& vector : vectors) {
        if (const auto value = vector.get(name)) {
          sum += *value;
          ++count;
        }
      }
      if (count == 0) {
        return {false, "measure " + std::string(name) + " undefined everywhere for " +
                           std::string(taxonomy::code(intent))};
      }
      const double mean = sum / static_cast<double>(count);
      const double target = profile.measure_target(name);
      const double rel = std::fabs(mean - target) / std::fabs(target);
      if (rel > worst_rel) {
        worst_rel = rel;
        worst_name = std::string(taxonomy::code(intent)) + "/" + std::string(name);
      }
    }
  }
  const bool calibration_ok = worst_rel <= 0.05;

  // Two groups from one profile, the second with avg_hover_time and task_time
  // scaled by 1.5. Exactly avg_hover_time, task_time and the structurally
  // dependent pct_serp_time differ; the other 12 measures are generated
  // identically and allow at most one false flag.
  const synth::CalibratedProfile& base = profiles.at(taxonomy::Intent::kParticularCase);
  synth::IntentProfile shifted_anchors = base.anchors;
  shifted_anchors.avg_hover_time *= 1.5;
  shifted_anchors.task_time *= 1.5;
  const synth::CalibratedProfile shifted = synth::calibrate(shifted_anchors);

  const std::vector<logs::Session> group_a =
      generate_split(base, taxonomy::Intent::kParticularCase, 500, Rng::mix(405, 0));
  const std::vector<logs::Session> group_b =
      generate_split(shifted, taxonomy::Intent::kParticularCase, 500, Rng::mix(405, 1));
  const std::vector<metrics::MeasureTestRow> rows = metrics::compare_measures(
      {{"base", measure_all(group_a, base.anchors.satisfied_dwell_seconds)},
       {"shifted", measure_all(group_b, base.anchors.satisfied_dwell_seconds)}});

  const std::set<std::string> expected_flags = {"avg_hover_time", "task_time",
                                                "pct_serp_time"};
  std::set<std::string> missing = expected_flags;
  int false_flags = 0;
  for (const metrics::MeasureTestRow& row : rows) {
    const bool flagged = row.tested && row.p_adjusted < 0.05;
    if (expected_flags.count(row.measure) > 0) {
      if (flagged) missing.erase(row.measure);
    } else if (flagged) {
      ++false_flags;
    }
  }
  const bool flags_ok = missing.empty() && false_flags <= 1;

  Outcome out;
  out.pass = calibration_ok && flags_ok;
  out.detail = "worst measure deviation " + fmt4(worst_rel * 100.0) + "% (" + worst_name +
               ") vs 5%; shifted-measure flags " +
               std::to_string(expected_flags.size() - missing.size()) + "/3, false flags " +
               std::to_string(false_flags) + "/12 (max 1)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: intent-aware satisfaction prediction beats intent-agnostic on
// a dataset whose feature-label relation flips sign between intents.

Outcome criterion_satisfaction_gain() {
  double diff_sum = 0.0;
  double agnostic_sum = 0.0;
  double aware_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(Rng::mix(505, seed));
    std::vector<sat::SatInstance> instances;
    instances.reserve(4000);
    for (int session = 0; session < 1000; ++session) {
      const taxonomy::Intent intent = session % 2 == 0
                                          ? taxonomy::Intent::kParticularCase
                                          : taxonomy::Intent::kCharacterization;
      const std::string session_id = "s" + std::to_string(session + 1);
      for (int query = 0; query < 4; ++query) {
        const double x = rng.uniform();
        bool satisfied = x > 0.5;
        if (intent == taxonomy::Intent::kCharacterization) satisfied = !satisfied;
        if (rng.uniform() < 0.08) satisfied = !satisfied;
        sat::SatInstance instance;
        instance.session_id = session_id;
        instance.query_id = session_id + "-q" + std::to_string(query + 1);
        instance.features[0] = x;
        instance.intent = intent;
        instance.graded = satisfied ? 5 : 1;
        instance.label = sat::binarize_satisfaction(instance.graded);
        instances.push_back(std::move(instance));
      }
    }

    sat::ExperimentConfig config;
    config.n_folds = 5;
    config.seed = seed;
    config.boost.n_trees = 40;
    config.boost.learning_rate = 0.2;
    config.boost.max_depth = 3;
    config.boost.min_samples_leaf = 20;

    config.mode = sat::Mode::kIntentAgnostic;
    const double agnostic = sat::run_experiment(instances, config).mean_auc;
    config.mode = sat::Mode::kIntentAware;
    const double aware = sat::run_experiment(instances, config).mean_auc;
    diff_sum += aware - agnostic;
    agnostic_sum += agnostic;
    aware_sum += aware;
  }
  const double mean_diff = diff_sum / 5.0;

  Outcome out;
  out.pass = mean_diff >= 0.05;
  out.detail = "mean AUC agnostic " + fmt4(agnostic_sum / 5.0) + " aware " +
               fmt4(aware_sum / 5.0) + ", gain " + fmt4(mean_diff) +
               " vs required 0.05 (5 seeds)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: intent-aware ranking beats intent-agnostic for all three
// algorithms on data whose relevance rules conflict across intents.

Outcome criterion_ranking_gain() {
  synth::RankingGenOptions options;
  options.n_queries = 400;
  options.docs_per_query = 10;
  options.noise = 0.1;
  options.seed = 606;
  const synth::RankingData data =
      synth::generate_ranking_data(synth::conflicting_relevance_functions(), options);

  std::string detail;
  bool all_improved = true;
  int strong_improvements = 0;
  for (const ltr::Algorithm algorithm : ltr::kAllAlgorithms) {
    ltr::TrainOptions train;
    train.algorithm = algorithm;
    train.adarank_max_rounds = 50;
    train.rankboost_rounds = 150;
    train.rankboost_max_thresholds = 64;
    train.lambdamart.n_trees = 100;
    train.lambdamart.learning_rate = 0.1;
    train.lambdamart.max_depth = 3;
    train.lambdamart.min_samples_leaf = 10;
    train.ndcg_k = 5;
    train.seed = 606;

    ltr::CvOptions cv;
    cv.n_folds = 5;
    cv.validation_fraction = 0.1;
    cv.seed = 606;

    cv.intent_aware = false;
    const double agnostic = ltr::cross_validate(data.instances, train, cv).mean.ndcg5;
    cv.intent_aware = true;
    const double aware = ltr::cross_validate(data.instances, train, cv).mean.ndcg5;

    const double gain = aware - agnostic;
    if (gain <= 0.0) all_improved = false;
    if (gain >= 0.02) ++strong_improvements;
    if (!detail.empty()) detail += ", ";
    detail += std::string(ltr::algorithm_name(algorithm)) + " " + fmt4(agnostic) +
              " -> " + fmt4(aware);
  }

  Outcome out;
  out.pass = all_improved && strong_improvements >= 2;
  out.detail = "NDCG@5 " + detail + "; improvements >= 0.02: " +
               std::to_string(strong_improvements) + "/3 (need 2)";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: sharing one trained model across every intent sub-ranker makes
// intent-aware scoring byte-identical to intent-agnostic scoring.

Outcome criterion_degeneracy_identity() {
  const std::map<taxonomy::Intent, synth::RelevanceFn> all_conflicting =
      synth::conflicting_relevance_functions();
  const synth::RelevanceFn shared_rule =
      all_conflicting.at(taxonomy::Intent::kParticularCase);
  std::map<taxonomy::Intent, synth::RelevanceFn> functions;
  for (const auto& [intent, fn] : all_conflicting) {
    (void)fn;
    functions[intent] = shared_rule;
  }

  synth::RankingGenOptions options;
  options.n_queries = 40;
  options.docs_per_query = 8;
  options.noise = 0.05;
  options.seed = 707;
  const synth::RankingData data = synth::generate_ranking_data(functions, options);

  ltr::TrainOptions train;
  train.algorithm = ltr::Algorithm::kAdaRank;
  train.adarank_max_rounds = 20;
  train.ndcg_k = 5;
  train.seed = 707;
  const ltr::Ranker ranker = ltr::train_ranker(data.instances, train);

  ltr::IntentConditionalRanker conditional;
  conditional.set_ranker(taxonomy::Intent::kParticularCase, ranker);
  conditional.set_ranker(taxonomy::Intent::kCharacterization, ranker);
  conditional.set_ranker(taxonomy::Intent::kPenalty, ranker);
  conditional.set_ranker(taxonomy::Intent::kProcedure, ranker);

  std::vector<double> agnostic_scores, aware_scores;
  for (const ltr::RankingInstance& instance : data.instances) {
    agnostic_scores.push_back(ranker.score(instance.features));
    aware_scores.push_back(conditional.score(instance.intent, instance.features));
  }

  bool scores_equal = agnostic_scores.size() == aware_scores.size();
  for (std::size_t i = 0; scores_equal && i < agnostic_scores.size(); ++i) {
    scores_equal = agnostic_scores[i] == aware_scores[i];
  }

  reports::Meta meta;
  meta.seed = 707;
  meta.config["command"] = "degeneracy";
  bool renders_equal = true;
  for (const reports::Format format : {reports::Format::kCsv, reports::Format::kJson}) {
    std::ostringstream agnostic_out, aware_out;
    reports::render_ranking_scores(agnostic_out, data.instances, agnostic_scores, format,
                                   meta);
    reports::render_ranking_scores(aware_out, data.instances, aware_scores, format, meta);
    renders_equal = renders_equal && agnostic_out.str() == aware_out.str();
  }

  Outcome out;
  out.pass = scores_equal && renders_equal;
  out.detail = std::to_string(agnostic_scores.size()) +
               " scores bitwise equal and CSV/JSON reports byte-identical under a shared "
               "sub-ranker";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: boosted trees separate a linear problem and least-squares
// training loss never increases.

Outcome criterion_boosting_sanity() {
  Rng rng(808);
  const std::array<double, 5> weights = {1.5, -2.0, 1.0, 0.5, -1.0};
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::vector<int> labels_int;
  while (rows.size() < 1000) {
    std::vector<double> row(5);
    double margin = 0.0;
    for (std::size_t d = 0; d < row.size(); ++d) {
      row[d] = rng.uniform(-1.0, 1.0);
      margin += weights[d] * row[d];
    }
    if (std::fabs(margin) < 0.1) continue;  // keep the classes cleanly separated
    rows.push_back(std::move(row));
    labels.push_back(margin > 0.0 ? 1.0 : 0.0);
    labels_int.push_back(margin > 0.0 ? 1 : 0);
  }
  const boosting::FeatureMatrix x = boosting::FeatureMatrix::from_rows(rows);
  boosting::BoostParams params;
  params.n_trees = 120;
  params.learning_rate = 0.15;
  params.max_depth = 4;
  params.min_samples_leaf = 5;
  const boosting::TreeEnsemble model =
      boosting::gbdt_fit(x, labels, boosting::Loss::kLogistic, params);
  const double auc = stats::roc_auc(labels_int, model.predict_raw(x));

  double worst_increase = 0.0;
  for (int dataset = 0; dataset < 20; ++dataset) {
    Rng local(Rng::mix(809, static_cast<std::uint64_t>(dataset)));
    const int n = 80 + 7 * dataset;
    const int d = 1 + dataset % 4;
    std::vector<std::vector<double>> data(static_cast<std::size_t>(n));
    std::vector<double> y;
    for (std::vector<double>& row : data) {
      row.resize(static_cast<std::size_t>(d));
      double value = 0.0;
      for (int c = 0; c < d; ++c) {
        row[static_cast<std::size_t>(c)] = local.normal();
        value += (c % 2 == 0 ? 1.0 : -0.5) * row[static_cast<std::size_t>(c)];
      }
      y.push_back(value + 0.3 * local.normal());
    }
    boosting::BoostParams ls;
    ls.n_trees = 30;
    ls.learning_rate = 0.3;
    ls.max_depth = 3;
    ls.min_samples_leaf = 2;
    boosting::FitReport report;
    boosting::gbdt_fit(boosting::FeatureMatrix::from_rows(data), y,
                       boosting::Loss::kLeastSquares, ls, &report);
    for (std::size_t i = 1; i < report.loss_curve.size(); ++i) {
      const double slack = 1e-12 * std::max(1.0, std::fabs(report.loss_curve[i - 1]));
      worst_increase = std::max(
          worst_increase, report.loss_curve[i] - report.loss_curve[i - 1] - slack);
    }
  }

  Outcome out;
  out.pass = auc >= 0.95 && worst_increase <= 0.0;
  out.detail = "logistic train AUC " + fmt4(auc) + " vs required 0.95; least-squares loss " +
               (worst_increase <= 0.0 ? "non-increasing" : "increased") +
               " across 20 datasets";
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: every CLI subcommand re-run with identical seeds and inputs
// produces byte-identical stdout and artifacts.

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome criterion_cli_determinism() {
  namespace fs = std::filesystem;
  const fs::path scratch = INTENTIR_SCRATCH_DIR;
  std::error_code ec;
  fs::remove_all(scratch, ec);
  fs::create_directories(scratch / "a");
  fs::create_directories(scratch / "b");

  const std::string cli = INTENTIR_CLI_PATH;
  const std::string annotations = INTENTIR_ANNOTATIONS_PATH;
  const std::string profiles = INTENTIR_PROFILES_PATH;

  const std::vector<std::string> commands = {
      "synth --profile '" + profiles + "' --n 60 --users 6 --seed 11 --out events.jsonl",
      "sessions events.jsonl --out sessions.jsonl --seed 1",
      "aggregate '" + annotations + "' --out agg.jsonl --seed 2",
      "kappa '" + annotations + "' --seed 2",
      "distribution '" + annotations + "' --format json --seed 2",
      "distribution '" + annotations + "' --raw --seed 2",
      "cooccurrence '" + annotations + "' --seed 2",
      "behavior sessions.jsonl --seed 2",
      "behavior sessions.jsonl --reasons --format json --seed 2",
      "correlate sessions.jsonl --seed 2",
      "sat sessions.jsonl --folds 3 --trees 15 --seed 3",
      "synth --ranking --queries 24 --docs 6 --noise 0.1 --seed 12 --out rank.jsonl "
      "--corpus-out corpus.json",
      "rank rank.jsonl --algo adarank --folds 3 --seed 4 --format json"};

  for (const char* run : {"a", "b"}) {
    const fs::path dir = scratch / run;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      char capture[16];
      std::snprintf(capture, sizeof(capture), "out%02zu.txt", i + 1);
      const std::string shell = "cd '" + dir.string() + "' && '" + cli + "' " +
                                commands[i] + " > " + capture + " 2>&1";
      const int rc = std::system(shell.c_str());
      if (rc != 0) {
        std::string tail;
        if (const auto text = read_file(dir / capture)) tail = *text;
        if (tail.size() > 300) tail = tail.substr(tail.size() - 300);
        for (char& ch : tail) {
          if (ch == '\n') ch = ' ';
        }
        return {false, "command " + std::to_string(i + 1) + " (run " + run +
                           ") exited nonzero: " + tail};
      }
    }
  }

  std::vector<std::string> artifacts = {"events.jsonl", "sessions.jsonl", "agg.jsonl",
                                        "rank.jsonl", "corpus.json"};
  for (std::size_t i = 1; i <= commands.size(); ++i) {
    char capture[16];
    std::snprintf(capture, sizeof(capture), "out%02zu.txt", i);
    artifacts.push_back(capture);
  }

  for (const std::string& name : artifacts) {
    const auto first = read_file(scratch / "a" / name);
    const auto second = read_file(scratch / "b" / name);
    if (!first || !second) {
      return {false, "artifact " + name + " missing from a rerun"};
    }
    if (*first != *second) {
      return {false, "artifact " + name + " differs between identical reruns"};
    }
  }

  Outcome out;
  out.pass = true;
  out.detail = std::to_string(commands.size()) + " subcommand invocations and " +
               std::to_string(artifacts.size()) +
               " captured outputs byte-identical across reruns";
  return out;
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  Outcome (*run)();
};

const std::array<Criterion, 9> kCriteria = {{
    {1, criterion_metric_oracles},
    {2, criterion_stat_fixtures},
    {3, criterion_aggregation_exhaustive},
    {4, criterion_generator_calibration},
    {5, criterion_satisfaction_gain},
    {6, criterion_ranking_gain},
    {7, criterion_degeneracy_identity},
    {8, criterion_boosting_sanity},
    {9, criterion_cli_determinism},
}};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  if (argc > 1) {
    selected = std::atoi(argv[1]);
    if (selected < 1 || selected > 9) {
      std::cerr << "usage: " << argv[0] << " [criterion 1..9]\n";
      return 2;
    }
  }

  bool all_pass = true;
  for (const Criterion& criterion : kCriteria) {
    if (selected != 0 && criterion.number != selected) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& error) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + error.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << criterion.number << ": "
              << (outcome.pass ? "PASS" : "FAIL") << " (" << outcome.detail << "; "
              << fmt2(elapsed) << " s)\n";
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
