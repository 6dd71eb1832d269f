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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "intentir/behavior_metrics.hpp"
#include "intentir/boosting.hpp"
#include "intentir/error.hpp"
#include "intentir/ltr.hpp"
#include "intentir/satisfaction.hpp"
#include "intentir/session_log.hpp"
#include "intentir/stats.hpp"
#include "intentir/synthgen.hpp"
#include "intentir/taxonomy.hpp"
#include "intentir/text_features.hpp"
#include "intentir/version.hpp"

namespace py = pybind11;
using namespace intentir;

namespace {

std::vector<taxonomy::AnnotationSet> annotations_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return taxonomy::read_annotations_jsonl(in);
}

std::vector<logs::Session> sessions_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  return logs::read_sessions_jsonl(in);
}

std::vector<taxonomy::AnnotatorLabel> final_labels(
    const std::vector<taxonomy::AnnotationSet>& sets) {
  std::vector<taxonomy::AnnotatorLabel> finals;
  finals.reserve(sets.size());
  for (const taxonomy::AnnotationSet& set : sets) {
    finals.push_back(taxonomy::aggregate_majority(set));
  }
  return finals;
}

py::object optional_to_py(const std::optional<double>& value) {
  if (!value) return py::none();
  return py::float_(*value);
}

py::dict rank_metrics_dict(const ltr::RankMetrics& metrics) {
  py::dict out;
  out["ndcg5"] = metrics.ndcg5;
  out["ndcg10"] = metrics.ndcg10;
  out["ndcg15"] = metrics.ndcg15;
  out["map"] = metrics.map;
  return out;
}

text::Corpus corpus_from_dict(const std::map<std::string, std::string>& docs) {
  text::Corpus corpus;
  for (const auto& [doc_id, body] : docs) {
    corpus.add_document(doc_id, body);
  }
  return corpus;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Core operations for intent-aware analysis of search sessions: label "
      "aggregation, session splitting, behavior measures, satisfaction and "
      "ranking experiments, and calibrated synthetic data.";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("version", [] { return std::string(kVersion); },
        "Library version string.");

  // Taxonomy.
  m.def("label_codes", [] {
    std::vector<std::string> codes;
    for (taxonomy::Label label : taxonomy::kAllLabels) {
      codes.emplace_back(taxonomy::code(label));
    }
    return codes;
  }, "All label codes: the five intents plus Others and Multi.");

  m.def("aggregate_annotations",
        [](const std::string& jsonl) {
          const auto sets = annotations_from_jsonl(jsonl);
          const auto finals = final_labels(sets);
          std::vector<taxonomy::AnnotationSet> aggregated;
          aggregated.reserve(sets.size());
          for (std::size_t i = 0; i < sets.size(); ++i) {
            aggregated.push_back({sets[i].item_id, {finals[i]}});
          }
          std::ostringstream out;
          taxonomy::write_annotations_jsonl(out, aggregated);
          return out.str();
        },
        py::arg("annotations_jsonl"),
        "Majority-vote each item's annotator labels; returns aggregated JSONL.");

  m.def("label_distribution",
        [](const std::string& jsonl, bool raw) {
          const auto sets = annotations_from_jsonl(jsonl);
          std::vector<taxonomy::AnnotatorLabel> labels;
          if (raw) {
            for (const auto& set : sets) {
              labels.insert(labels.end(), set.labels.begin(), set.labels.end());
            }
          } else {
            labels = final_labels(sets);
          }
          const taxonomy::LabelDistribution dist = taxonomy::label_distribution(labels);
          py::dict out;
          for (std::size_t i = 0; i < taxonomy::kAllLabels.size(); ++i) {
            py::dict entry;
            entry["count"] = dist.counts[i];
            entry["share"] = dist.share[i];
            out[py::str(std::string(taxonomy::code(taxonomy::kAllLabels[i])))] = entry;
          }
          out["total"] = dist.total;
          return out;
        },
        py::arg("annotations_jsonl"), py::arg("raw") = false,
        "Label counts and shares, majority-aggregated unless raw=True.");

  m.def("cooccurrence",
        [](const std::string& jsonl) {
          const auto matrix =
              taxonomy::cooccurrence_matrix(final_labels(annotations_from_jsonl(jsonl)));
          py::dict out;
          std::vector<std::vector<double>> share;
          for (const auto& row : matrix.share) {
            share.emplace_back(row.begin(), row.end());
          }
          out["share"] = share;
          out["pair_count"] = matrix.pair_count;
          out["skipped_items"] = matrix.skipped_items;
          return out;
        },
        py::arg("annotations_jsonl"),
        "Intent co-occurrence shares across multi-intent items.");

  m.def("annotation_kappa",
        [](const std::string& jsonl) {
          const auto sets = annotations_from_jsonl(jsonl);
          require(!sets.empty(), "no annotation items");
          std::vector<std::vector<int>> counts;
          counts.reserve(sets.size());
          for (const auto& set : sets) {
            std::vector<int> row(taxonomy::kAllLabels.size(), 0);
            for (const auto& label : set.labels) {
              ++row[static_cast<std::size_t>(label.value)];
            }
            counts.push_back(std::move(row));
          }
          return stats::fleiss_kappa(counts);
        },
        py::arg("annotations_jsonl"),
        "Fleiss kappa over the items' label counts.");

  // Statistics.
  m.def("kruskal_wallis",
        [](const std::vector<std::vector<double>>& groups) {
          const stats::TestResult r = stats::kruskal_wallis(groups);
          return py::make_tuple(r.statistic, r.p_value);
        },
        py::arg("groups"), "Kruskal-Wallis H and p-value.");
  m.def("anova_oneway",
        [](const std::vector<std::vector<double>>& groups) {
          const stats::TestResult r = stats::anova_oneway(groups);
          return py::make_tuple(r.statistic, r.p_value);
        },
        py::arg("groups"), "One-way ANOVA F and p-value.");
  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
          const stats::TestResult r = stats::pearson_correlation(x, y);
          return py::make_tuple(r.statistic, r.p_value);
        },
        py::arg("x"), py::arg("y"), "Pearson r and two-sided p-value.");
  m.def("holm_bonferroni", &stats::holm_bonferroni, py::arg("p_values"),
        "Step-down adjusted p-values, input order preserved.");
  m.def("fleiss_kappa", &stats::fleiss_kappa, py::arg("category_counts"),
        "Fleiss kappa from an items-by-categories count table.");
  m.def("roc_auc", &stats::roc_auc, py::arg("labels"), py::arg("scores"),
        "Area under the ROC curve with midrank tie handling.");
  m.def("ndcg_at_k", &ltr::ndcg_at_k, py::arg("ranked_rels"), py::arg("k"),
        "NDCG of relevance grades in ranked order.");
  m.def("average_precision", &ltr::average_precision, py::arg("ranked_rels"),
        "Binary average precision of grades in ranked order.");

  // Session logs.
  m.def("split_sessions",
        [](const std::string& events_jsonl, double gap_minutes, int min_terms,
           bool filter) {
          std::istringstream in(events_jsonl);
          std::vector<logs::RawEvent> events = logs::read_events_jsonl(in);
          logs::SplitOptions options;
          options.gap_minutes = gap_minutes;
          logs::SplitReport report;
          std::vector<logs::Session> sessions =
              logs::split_sessions(std::move(events), options, &report);
          if (filter) {
            logs::FilterOptions filter_options;
            filter_options.min_max_query_terms = min_terms;
            sessions = logs::filter_sessions(sessions, filter_options);
          }
          std::ostringstream out;
          logs::write_sessions_jsonl(out, sessions);
          py::dict summary;
          summary["n_events"] = report.n_events;
          summary["n_sessions"] = report.n_sessions;
          summary["orphan_events"] = report.orphan_events;
          summary["unmatched_hover_exits"] = report.unmatched_hover_exits;
          summary["sessions_kept"] = sessions.size();
          return py::make_tuple(out.str(), summary);
        },
        py::arg("events_jsonl"), py::arg("gap_minutes") = 30.0,
        py::arg("min_terms") = 2, py::arg("filter") = true,
        "Split an event log into sessions; returns (sessions_jsonl, summary).");

  // Behavior measures.
  m.def("measure_names", [] {
    std::vector<std::string> names;
    for (std::string_view name : metrics::kSessionMeasureNames) names.emplace_back(name);
    return names;
  }, "The per-session behavior measures, in report order.");
  m.def("online_metric_names", [] {
    std::vector<std::string> names;
    for (std::string_view name : metrics::kOnlineMetricNames) names.emplace_back(name);
    return names;
  }, "The per-query online metrics, in report order.");

  m.def("session_measures",
        [](const std::string& sessions_jsonl, double threshold) {
          py::list out;
          for (const logs::Session& session : sessions_from_jsonl(sessions_jsonl)) {
            const metrics::MeasureVector vector =
                metrics::session_measures(session, threshold);
            py::dict row;
            row["session_id"] = session.session_id;
            if (session.intent) {
              row["intent"] =
                  std::string(taxonomy::code(session.intent->value));
            } else {
              row["intent"] = py::none();
            }
            py::dict values;
            for (const auto& [name, value] : vector.values) {
              values[py::str(name)] = optional_to_py(value);
            }
            row["measures"] = values;
            out.append(row);
          }
          return out;
        },
        py::arg("sessions_jsonl"),
        py::arg("threshold") = metrics::kSatisfiedDwellSeconds,
        "Behavior measures per session; undefined measures are None.");

  m.def("compare_measures",
        [](const std::string& sessions_jsonl, double threshold) {
          std::map<taxonomy::Intent, std::vector<metrics::MeasureVector>> by_intent;
          for (const logs::Session& session : sessions_from_jsonl(sessions_jsonl)) {
            if (!session.intent) continue;
            const auto intent = taxonomy::as_intent(session.intent->value);
            if (!intent) continue;
            by_intent[*intent].push_back(
                metrics::session_measures(session, threshold));
          }
          std::vector<std::pair<std::string, std::vector<metrics::MeasureVector>>>
              groups;
          for (auto& [intent, vectors] : by_intent) {
            groups.emplace_back(std::string(taxonomy::code(intent)),
                                std::move(vectors));
          }
          py::list out;
          for (const metrics::MeasureTestRow& row : metrics::compare_measures(groups)) {
            py::dict entry;
            entry["measure"] = row.measure;
            py::dict means;
            for (std::size_t g = 0; g < groups.size(); ++g) {
              py::dict group;
              group["mean"] = optional_to_py(row.group_means[g]);
              group["n"] = row.group_sizes[g];
              means[py::str(groups[g].first)] = group;
            }
            entry["groups"] = means;
            entry["tested"] = row.tested;
            if (row.tested) {
              entry["kw_h"] = row.test.statistic;
              entry["kw_p"] = row.test.p_value;
              entry["p_holm"] = row.p_adjusted;
            } else {
              entry["kw_h"] = py::none();
              entry["kw_p"] = py::none();
              entry["p_holm"] = py::none();
            }
            out.append(entry);
          }
          return out;
        },
        py::arg("sessions_jsonl"),
        py::arg("threshold") = metrics::kSatisfiedDwellSeconds,
        "Kruskal-Wallis per measure across intent groups, Holm-adjusted.");

  m.def("correlate_with_satisfaction",
        [](const std::string& sessions_jsonl) {
          py::list out;
          for (const metrics::CorrelationRow& row :
               metrics::correlate_with_satisfaction(sessions_from_jsonl(sessions_jsonl))) {
            py::dict entry;
            entry["metric"] = row.metric;
            entry["n"] = row.n_pairs;
            entry["tested"] = row.tested;
            if (row.tested) {
              entry["r"] = row.pearson.statistic;
              entry["p"] = row.pearson.p_value;
            } else {
              entry["r"] = py::none();
              entry["p"] = py::none();
            }
            out.append(entry);
          }
          return out;
        },
        py::arg("sessions_jsonl"),
        "Pearson correlation of each online metric with graded satisfaction.");

  // Satisfaction prediction.
  m.def("satisfaction_experiment",
        [](const std::string& jsonl, const std::string& mode, int folds,
           std::uint64_t seed, int trees, double learning_rate, int depth) {
          std::vector<sat::SatInstance> instances;
          if (jsonl.find("\"features\"") != std::string::npos) {
            std::istringstream in(jsonl);
            instances = sat::read_instances_jsonl(in);
          } else {
            instances = sat::make_instances(sessions_from_jsonl(jsonl));
          }
          sat::ExperimentConfig config;
          config.mode = mode == "aware" ? sat::Mode::kIntentAware
                                        : sat::Mode::kIntentAgnostic;
          require(mode == "aware" || mode == "agnostic",
                  "mode must be 'agnostic' or 'aware'");
          config.n_folds = folds;
          config.seed = seed;
          config.boost.n_trees = trees;
          config.boost.learning_rate = learning_rate;
          config.boost.max_depth = depth;
          config.boost.seed = seed;
          const sat::ExperimentResult result = sat::run_experiment(instances, config);
          py::dict out;
          out["mean_auc"] = result.mean_auc;
          py::list fold_rows;
          for (const sat::FoldResult& fold : result.folds) {
            py::dict row;
            row["auc"] = fold.auc;
            row["n_train"] = fold.n_train;
            row["n_test"] = fold.n_test;
            fold_rows.append(row);
          }
          out["folds"] = fold_rows;
          return out;
        },
        py::arg("sessions_or_instances_jsonl"), py::arg("mode") = "agnostic",
        py::arg("folds") = 5, py::arg("seed") = 0, py::arg("trees") = 100,
        py::arg("learning_rate") = 0.1, py::arg("depth") = 3,
        "Cross-validated satisfaction AUC; mode 'agnostic' or 'aware'.");

  // Learning to rank.
  m.def("ranking_experiment",
        [](const std::string& instances_jsonl, const std::string& algorithm,
           bool intent_aware, int folds, double validation_fraction,
           std::uint64_t seed, int ndcg_k) {
          std::istringstream in(instances_jsonl);
          const std::vector<ltr::RankingInstance> instances =
              ltr::read_instances_jsonl(in);
          ltr::TrainOptions train_options;
          train_options.algorithm = ltr::parse_algorithm(algorithm);
          train_options.ndcg_k = ndcg_k;
          train_options.seed = seed;
          ltr::CvOptions cv_options;
          cv_options.n_folds = folds;
          cv_options.validation_fraction = validation_fraction;
          cv_options.seed = seed;
          cv_options.intent_aware = intent_aware;
          const ltr::CvResult result =
              ltr::cross_validate(instances, train_options, cv_options);
          py::dict out = rank_metrics_dict(result.mean);
          out["n_queries"] = result.n_queries;
          py::list fold_rows;
          for (const ltr::RankMetrics& fold : result.per_fold) {
            fold_rows.append(rank_metrics_dict(fold));
          }
          out["per_fold"] = fold_rows;
          return out;
        },
        py::arg("instances_jsonl"), py::arg("algorithm") = "adarank",
        py::arg("intent_aware") = false, py::arg("folds") = 5,
        py::arg("validation_fraction") = 0.1, py::arg("seed") = 0,
        py::arg("ndcg_k") = 10,
        "Cross-validated ranking quality for one algorithm.");

  m.def("evaluate_ranking",
        [](const std::string& instances_jsonl, const std::vector<double>& scores) {
          std::istringstream in(instances_jsonl);
          return rank_metrics_dict(
              ltr::evaluate_ranking(ltr::read_instances_jsonl(in), scores));
        },
        py::arg("instances_jsonl"), py::arg("scores"),
        "Macro NDCG@{5,10,15} and MAP of externally supplied scores.");

  // Text features.
  m.def("tokenize",
        [](const std::string& input) { return text::tokenize(input); },
        py::arg("text"), "Lowercased tokens; CJK runs become bigrams.");
  m.def("content_feature_names", [] {
    std::vector<std::string> names;
    for (std::string_view name : text::kContentFeatureNames) names.emplace_back(name);
    return names;
  }, "Names of the query-document content features.");
  m.def("content_features",
        [](const std::string& query, const std::string& doc_id,
           const std::map<std::string, std::string>& corpus_docs) {
          const text::Corpus corpus = corpus_from_dict(corpus_docs);
          const text::ContentFeatures features =
              text::content_features(text::tokenize(query), doc_id, corpus);
          py::dict out;
          out["avg_tf"] = features.avg_tf;
          out["avg_idf"] = features.avg_idf;
          out["avg_tfidf"] = features.avg_tfidf;
          out["bm25"] = features.bm25;
          out["cosine_tfidf"] = features.cosine_tfidf;
          return out;
        },
        py::arg("query"), py::arg("doc_id"), py::arg("corpus"),
        "Content features of a query against one document of a corpus.");

  // Gradient boosting.
  m.def("gbdt_fit",
        [](const std::vector<std::vector<double>>& rows,
           const std::vector<double>& labels, const std::string& loss, int trees,
           double learning_rate, int depth, int min_leaf, double subsample,
           std::uint64_t seed) {
          boosting::BoostParams params;
          params.n_trees = trees;
          params.learning_rate = learning_rate;
          params.max_depth = depth;
          params.min_samples_leaf = min_leaf;
          params.subsample = subsample;
          params.seed = seed;
          const boosting::TreeEnsemble model =
              boosting::gbdt_fit(boosting::FeatureMatrix::from_rows(rows), labels,
                                 boosting::parse_loss(loss), params);
          return model.to_json().dump();
        },
        py::arg("rows"), py::arg("labels"), py::arg("loss") = "logistic",
        py::arg("trees") = 100, py::arg("learning_rate") = 0.1, py::arg("depth") = 3,
        py::arg("min_leaf") = 5, py::arg("subsample") = 1.0, py::arg("seed") = 0,
        "Fit a gradient-boosted tree model; returns its JSON serialization.");
  m.def("gbdt_predict",
        [](const std::string& model_json,
           const std::vector<std::vector<double>>& rows, bool proba) {
          boosting::TreeEnsemble model;
          try {
            model = boosting::TreeEnsemble::from_json(nlohmann::json::parse(model_json));
          } catch (const nlohmann::json::exception& error) {
            throw ValidationError(std::string("model JSON: ") + error.what());
          }
          const boosting::FeatureMatrix x = boosting::FeatureMatrix::from_rows(rows);
          return proba ? model.predict_proba(x) : model.predict_raw(x);
        },
        py::arg("model_json"), py::arg("rows"), py::arg("proba") = false,
        "Score rows with a serialized model; proba=True applies the sigmoid.");

  // Synthetic data.
  m.def("generate_sessions",
        [](const std::string& profiles_json, std::size_t n_sessions,
           std::uint64_t seed, const std::map<std::string, double>& mix,
           int n_users) {
          nlohmann::json parsed;
          try {
            parsed = nlohmann::json::parse(profiles_json);
          } catch (const nlohmann::json::exception& error) {
            throw ValidationError(std::string("profiles JSON: ") + error.what());
          }
          const auto profiles = synth::load_profiles_json(parsed);
          synth::SessionGenOptions options;
          options.n_sessions = n_sessions;
          options.seed = seed;
          options.n_users = n_users;
          if (mix.empty()) {
            for (const auto& [intent, profile] : profiles) {
              (void)profile;
              options.intent_mix[intent] = 1.0 / static_cast<double>(profiles.size());
            }
          } else {
            for (const auto& [code, weight] : mix) {
              options.intent_mix[taxonomy::parse_intent(code)] = weight;
            }
          }
          std::ostringstream out;
          logs::write_events_jsonl(out, synth::generate_sessions(profiles, options));
          return out.str();
        },
        py::arg("profiles_json"), py::arg("n_sessions"), py::arg("seed") = 0,
        py::arg("mix") = std::map<std::string, double>{}, py::arg("n_users") = 12,
        "Generate a calibrated synthetic event log; returns events JSONL.");

  m.def("measure_targets",
        [](const std::string& profiles_json, const std::string& intent) {
          nlohmann::json parsed;
          try {
            parsed = nlohmann::json::parse(profiles_json);
          } catch (const nlohmann::json::exception& error) {
            throw ValidationError(std::string("profiles JSON: ") + error.what());
          }
          const auto profiles = synth::load_profiles_json(parsed);
          const auto it = profiles.find(taxonomy::parse_intent(intent));
          require(it != profiles.end(), "profile has no intent " + intent);
          py::dict out;
          for (std::string_view name : metrics::kSessionMeasureNames) {
            out[py::str(std::string(name))] =
                it->second.measure_target(std::string(name));
          }
          return out;
        },
        py::arg("profiles_json"), py::arg("intent"),
        "Expected value of every session measure under one intent profile.");

  m.def("generate_ranking_data",
        [](std::size_t n_queries, int docs_per_query, double noise,
           std::uint64_t seed) {
          synth::RankingGenOptions options;
          options.n_queries = n_queries;
          options.docs_per_query = docs_per_query;
          options.noise = noise;
          options.seed = seed;
          const synth::RankingData data = synth::generate_ranking_data(
              synth::conflicting_relevance_functions(), options);
          std::ostringstream instances;
          ltr::write_instances_jsonl(instances, data.instances);
          std::ostringstream corpus;
          data.corpus.write_index_json(corpus);
          return py::make_tuple(instances.str(), corpus.str());
        },
        py::arg("n_queries"), py::arg("docs_per_query") = 10,
        py::arg("noise") = 0.1, py::arg("seed") = 0,
        "Ranking data with intent-conflicting relevance; returns "
        "(instances_jsonl, corpus_index_json).");
}
