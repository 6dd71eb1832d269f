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
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intentir/behavior_metrics.hpp"
#include "intentir/boosting.hpp"
#include "intentir/error.hpp"
#include "intentir/ltr.hpp"
#include "intentir/reports.hpp"
#include "intentir/satisfaction.hpp"
#include "intentir/session_log.hpp"
#include "intentir/stats.hpp"
#include "intentir/synthgen.hpp"
#include "intentir/taxonomy.hpp"
#include "intentir/text_features.hpp"
#include "intentir/version.hpp"

namespace {

using namespace intentir;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open input file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "cannot open output file: " + path);
  return out;
}

std::vector<taxonomy::AnnotationSet> read_annotations(const std::string& path) {
  std::ifstream in = open_input(path);
  return taxonomy::read_annotations_jsonl(in);
}

std::vector<logs::Session> read_sessions(const std::string& path) {
  std::ifstream in = open_input(path);
  return logs::read_sessions_jsonl(in);
}

std::vector<taxonomy::AnnotatorLabel> aggregate_all(
    const std::vector<taxonomy::AnnotationSet>& sets) {
  std::vector<taxonomy::AnnotatorLabel> finals;
  finals.reserve(sets.size());
  for (const taxonomy::AnnotationSet& set : sets) {
    finals.push_back(taxonomy::aggregate_majority(set));
  }
  return finals;
}

std::map<taxonomy::Intent, double> parse_mix(const std::string& text) {
  std::map<taxonomy::Intent, double> mix;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    const std::size_t eq = token.find('=');
    require(eq != std::string::npos && eq > 0 && eq + 1 < token.size(),
            "mix entries look like INTENT=WEIGHT: " + token);
    const taxonomy::Intent intent = taxonomy::parse_intent(token.substr(0, eq));
    double weight = 0.0;
    try {
      weight = std::stod(token.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("mix weight is not a number: " + token);
    }
    require(mix.emplace(intent, weight).second, "mix repeats an intent: " + token);
  }
  require(!mix.empty(), "empty intent mix");
  return mix;
}

// Effective settings of this invocation; digested into the report header.
struct Common {
  std::string format = "csv";
  std::uint64_t seed = 0;
};

reports::Meta make_meta(const Common& common, nlohmann::json config) {
  reports::Meta meta;
  meta.seed = common.seed;
  config["seed"] = common.seed;
  config["version"] = std::string(kVersion);
  meta.config = std::move(config);
  return meta;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", common.seed, "seed recorded in the report header");
}

void run_sessions(const std::string& input, const std::string& out_path,
                  double gap_minutes, int min_terms, bool keep_short,
                  const Common& common) {
  std::ifstream in = open_input(input);
  std::vector<logs::RawEvent> events = logs::read_events_jsonl(in);
  logs::SplitOptions split_options;
  split_options.gap_minutes = gap_minutes;
  logs::SplitReport report;
  std::vector<logs::Session> sessions =
      logs::split_sessions(std::move(events), split_options, &report);
  if (!keep_short) {
    logs::FilterOptions filter;
    filter.min_max_query_terms = min_terms;
    sessions = logs::filter_sessions(sessions, filter);
  }
  std::ofstream out = open_output(out_path);
  logs::write_sessions_jsonl(out, sessions);
  reports::Meta meta = make_meta(common, {{"command", "sessions"},
                                          {"input", input},
                                          {"out", out_path},
                                          {"gap_minutes", gap_minutes},
                                          {"min_terms", min_terms},
                                          {"filtered", !keep_short}});
  reports::render_split_summary(std::cout, report, sessions.size(),
                                reports::parse_format(common.format), meta);
}

void run_aggregate(const std::string& input, const std::string& out_path,
                   const Common& common) {
  const std::vector<taxonomy::AnnotationSet> sets = read_annotations(input);
  const std::vector<taxonomy::AnnotatorLabel> finals = aggregate_all(sets);
  if (!out_path.empty()) {
    std::vector<taxonomy::AnnotationSet> aggregated;
    aggregated.reserve(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
      aggregated.push_back({sets[i].item_id, {finals[i]}});
    }
    std::ofstream out = open_output(out_path);
    taxonomy::write_annotations_jsonl(out, aggregated);
  }
  reports::Meta meta = make_meta(
      common, {{"command", "aggregate"}, {"input", input}, {"out", out_path}});
  reports::render_distribution(std::cout, taxonomy::label_distribution(finals),
                               reports::parse_format(common.format), meta);
}

void run_kappa(const std::string& input, const Common& common) {
  const std::vector<taxonomy::AnnotationSet> sets = read_annotations(input);
  require(!sets.empty(), "kappa: no annotation items");
  std::vector<std::vector<int>> counts;
  counts.reserve(sets.size());
  for (const taxonomy::AnnotationSet& set : sets) {
    std::vector<int> row(taxonomy::kAllLabels.size(), 0);
    for (const taxonomy::AnnotatorLabel& label : set.labels) {
      ++row[static_cast<std::size_t>(label.value)];
    }
    counts.push_back(std::move(row));
  }
  const double kappa = stats::fleiss_kappa(counts);
  reports::Meta meta = make_meta(common, {{"command", "kappa"}, {"input", input}});
  reports::render_kappa(std::cout, kappa, sets.size(), sets.front().labels.size(),
                        reports::parse_format(common.format), meta);
}

void run_distribution(const std::string& input, bool raw, const Common& common) {
  const std::vector<taxonomy::AnnotationSet> sets = read_annotations(input);
  std::vector<taxonomy::AnnotatorLabel> labels;
  if (raw) {
    for (const taxonomy::AnnotationSet& set : sets) {
      labels.insert(labels.end(), set.labels.begin(), set.labels.end());
    }
  } else {
    labels = aggregate_all(sets);
  }
  reports::Meta meta = make_meta(
      common, {{"command", "distribution"}, {"input", input}, {"raw", raw}});
  reports::render_distribution(std::cout, taxonomy::label_distribution(labels),
                               reports::parse_format(common.format), meta);
}

void run_cooccurrence(const std::string& input, const Common& common) {
  const std::vector<taxonomy::AnnotationSet> sets = read_annotations(input);
  const taxonomy::CooccurrenceMatrix matrix =
      taxonomy::cooccurrence_matrix(aggregate_all(sets));
  reports::Meta meta =
      make_meta(common, {{"command", "cooccurrence"}, {"input", input}});
  reports::render_cooccurrence(std::cout, matrix,
                               reports::parse_format(common.format), meta);
}

void run_behavior(const std::string& input, const std::string& by, double threshold,
                  bool reasons, const Common& common) {
  require(by == "intent", "behavior: only --by intent is supported");
  const std::vector<logs::Session> sessions = read_sessions(input);
  reports::Meta meta = make_meta(common, {{"command", "behavior"},
                                          {"input", input},
                                          {"by", by},
                                          {"threshold", threshold},
                                          {"reasons", reasons}});
  const reports::Format format = reports::parse_format(common.format);
  if (reasons) {
    reports::render_click_reasons(std::cout, metrics::click_reason_report(sessions),
                                  format, meta);
    return;
  }
  std::map<taxonomy::Intent, std::vector<metrics::MeasureVector>> by_intent;
  std::size_t skipped = 0;
  for (const logs::Session& session : sessions) {
    std::optional<taxonomy::Intent> intent;
    if (session.intent) intent = taxonomy::as_intent(session.intent->value);
    if (!intent) {
      ++skipped;
      continue;
    }
    by_intent[*intent].push_back(metrics::session_measures(session, threshold));
  }
  if (skipped > 0) {
    std::cerr << "note: skipped " << skipped
              << " sessions without a single-intent label\n";
  }
  std::vector<std::pair<std::string, std::vector<metrics::MeasureVector>>> groups;
  std::vector<std::string> names;
  for (auto& [intent, vectors] : by_intent) {
    names.emplace_back(taxonomy::code(intent));
    groups.emplace_back(names.back(), std::move(vectors));
  }
  reports::render_measure_tests(std::cout, names, metrics::compare_measures(groups),
                                format, meta);
}

void run_correlate(const std::string& input, const Common& common) {
  const std::vector<logs::Session> sessions = read_sessions(input);
  reports::Meta meta = make_meta(common, {{"command", "correlate"}, {"input", input}});
  reports::render_correlations(std::cout,
                               metrics::correlate_with_satisfaction(sessions),
                               reports::parse_format(common.format), meta);
}

std::vector<sat::SatInstance> load_sat_instances(const std::string& path) {
  // Accept either prepared instances or raw sessions; the first record tells
  // them apart.
  std::ifstream probe = open_input(path);
  std::string line;
  while (std::getline(probe, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    line.clear();
  }
  require(!line.empty(), "sat: input file is empty: " + path);
  const bool is_instances = line.find("\"features\"") != std::string::npos;
  std::ifstream in = open_input(path);
  if (is_instances) return sat::read_instances_jsonl(in);
  return sat::make_instances(logs::read_sessions_jsonl(in));
}

void run_sat(const std::string& input, const std::string& mode,
             const std::string& groups_text, int folds, boosting::BoostParams boost,
             const Common& common) {
  const std::vector<sat::SatInstance> instances = load_sat_instances(input);
  std::vector<sat::FeatureGroup> groups;
  {
    std::stringstream stream(groups_text);
    std::string token;
    while (std::getline(stream, token, ',')) {
      groups.push_back(sat::parse_group(token));
    }
  }
  std::vector<sat::Mode> modes;
  if (mode == "both" || mode == "agnostic") modes.push_back(sat::Mode::kIntentAgnostic);
  if (mode == "both" || mode == "aware") modes.push_back(sat::Mode::kIntentAware);
  require(!modes.empty(), "sat: mode must be agnostic, aware, or both");

  boost.seed = common.seed;
  std::vector<std::pair<std::string, sat::ExperimentResult>> results;
  for (sat::Mode m : modes) {
    sat::ExperimentConfig config;
    config.mode = m;
    config.groups = groups;
    config.n_folds = folds;
    config.seed = common.seed;
    config.boost = boost;
    results.emplace_back(std::string(sat::mode_name(m)),
                         sat::run_experiment(instances, config));
  }
  reports::Meta meta = make_meta(common, {{"command", "sat"},
                                          {"input", input},
                                          {"mode", mode},
                                          {"groups", groups_text},
                                          {"folds", folds},
                                          {"trees", boost.n_trees},
                                          {"learning_rate", boost.learning_rate},
                                          {"max_depth", boost.max_depth}});
  reports::render_sat_results(std::cout, results, reports::parse_format(common.format),
                              meta);
}

void run_rank(const std::string& input, const std::string& algo,
              const std::string& mode, int folds, double val_fraction, int ndcg_k,
              int adarank_rounds, int rankboost_rounds, boosting::BoostParams boost,
              const Common& common) {
  std::ifstream in = open_input(input);
  const std::vector<ltr::RankingInstance> instances = ltr::read_instances_jsonl(in);

  std::vector<ltr::Algorithm> algorithms;
  if (algo == "all") {
    algorithms.assign(ltr::kAllAlgorithms.begin(), ltr::kAllAlgorithms.end());
  } else {
    algorithms.push_back(ltr::parse_algorithm(algo));
  }
  std::vector<bool> aware_settings;
  if (mode == "both" || mode == "agnostic") aware_settings.push_back(false);
  if (mode == "both" || mode == "aware") aware_settings.push_back(true);
  require(!aware_settings.empty(), "rank: mode must be agnostic, aware, or both");

  std::vector<std::pair<std::string, ltr::CvResult>> results;
  for (ltr::Algorithm algorithm : algorithms) {
    ltr::TrainOptions train_options;
    train_options.algorithm = algorithm;
    train_options.adarank_max_rounds = adarank_rounds;
    train_options.rankboost_rounds = rankboost_rounds;
    train_options.lambdamart = boost;
    train_options.ndcg_k = ndcg_k;
    train_options.seed = common.seed;
    for (bool aware : aware_settings) {
      ltr::CvOptions cv_options;
      cv_options.n_folds = folds;
      cv_options.validation_fraction = val_fraction;
      cv_options.seed = common.seed;
      cv_options.intent_aware = aware;
      const std::string name = std::string(ltr::algorithm_name(algorithm)) +
                               (aware ? "/aware" : "/agnostic");
      results.emplace_back(name,
                           ltr::cross_validate(instances, train_options, cv_options));
    }
  }
  reports::Meta meta = make_meta(common, {{"command", "rank"},
                                          {"input", input},
                                          {"algo", algo},
                                          {"mode", mode},
                                          {"folds", folds},
                                          {"validation_fraction", val_fraction},
                                          {"ndcg_k", ndcg_k}});
  reports::render_cv_results(std::cout, results, reports::parse_format(common.format),
                             meta);
}

void run_synth(const std::string& profile_path, std::size_t n_sessions,
               const std::string& mix_text, const std::string& out_path, int n_users,
               bool ranking, std::size_t n_queries, int docs_per_query, double noise,
               const std::string& corpus_out, const Common& common) {
  require(!out_path.empty(), "synth: --out is required");
  const reports::Format format = reports::parse_format(common.format);
  if (ranking) {
    synth::RankingGenOptions options;
    options.n_queries = n_queries;
    options.docs_per_query = docs_per_query;
    options.noise = noise;
    options.seed = common.seed;
    if (!mix_text.empty()) options.intent_mix = parse_mix(mix_text);
    const synth::RankingData data =
        synth::generate_ranking_data(synth::conflicting_relevance_functions(), options);
    std::ofstream out = open_output(out_path);
    ltr::write_instances_jsonl(out, data.instances);
    if (!corpus_out.empty()) {
      std::ofstream corpus_stream = open_output(corpus_out);
      data.corpus.write_index_json(corpus_stream);
    }
    reports::Meta meta = make_meta(common, {{"command", "synth"},
                                            {"ranking", true},
                                            {"queries", n_queries},
                                            {"docs_per_query", docs_per_query},
                                            {"noise", noise},
                                            {"mix", mix_text},
                                            {"out", out_path}});
    reports::render_synth_summary(std::cout, n_queries, data.instances.size(), format,
                                  meta);
    return;
  }

  const std::map<taxonomy::Intent, synth::CalibratedProfile> profiles =
      synth::load_profiles_file(profile_path);
  synth::SessionGenOptions options;
  options.n_sessions = n_sessions;
  options.seed = common.seed;
  options.n_users = n_users;
  if (!mix_text.empty()) {
    options.intent_mix = parse_mix(mix_text);
  } else {
    for (const auto& [intent, profile] : profiles) {
      (void)profile;
      options.intent_mix[intent] = 1.0 / static_cast<double>(profiles.size());
    }
  }
  const std::vector<logs::RawEvent> events =
      synth::generate_sessions(profiles, options);
  std::ofstream out = open_output(out_path);
  logs::write_events_jsonl(out, events);
  reports::Meta meta = make_meta(common, {{"command", "synth"},
                                          {"ranking", false},
                                          {"profile", profile_path},
                                          {"n", n_sessions},
                                          {"users", n_users},
                                          {"mix", mix_text},
                                          {"out", out_path}});
  reports::render_synth_summary(std::cout, n_sessions, events.size(), format, meta);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"intent-aware search behavior toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.footer(
      "Environment: INTENTIR_THREADS caps worker threads (the current build is\n"
      "single-threaded, so any value behaves like 1).");

  // sessions
  auto* sessions_cmd =
      app.add_subcommand("sessions", "split an event log into sessions");
  std::string sessions_input, sessions_out;
  double gap_minutes = 30.0;
  int min_terms = 2;
  bool keep_short = false;
  Common sessions_common;
  sessions_cmd->add_option("input", sessions_input, "events JSONL")->required();
  sessions_cmd->add_option("--out", sessions_out, "sessions JSONL to write")
      ->required();
  sessions_cmd->add_option("--gap-minutes", gap_minutes,
                           "inactivity gap that starts a new session");
  sessions_cmd->add_option("--min-terms", min_terms,
                           "keep sessions whose longest query has this many terms");
  sessions_cmd->add_flag("--keep-short", keep_short, "skip the query-length filter");
  add_common(sessions_cmd, sessions_common);
  sessions_cmd->callback([&] {
    run_sessions(sessions_input, sessions_out, gap_minutes, min_terms, keep_short,
                 sessions_common);
  });

  // aggregate
  auto* aggregate_cmd =
      app.add_subcommand("aggregate", "majority-vote annotator labels per item");
  std::string aggregate_input, aggregate_out;
  Common aggregate_common;
  aggregate_cmd->add_option("input", aggregate_input, "annotations JSONL")->required();
  aggregate_cmd->add_option("--out", aggregate_out, "aggregated annotations JSONL");
  add_common(aggregate_cmd, aggregate_common);
  aggregate_cmd->callback(
      [&] { run_aggregate(aggregate_input, aggregate_out, aggregate_common); });

  // kappa
  auto* kappa_cmd =
      app.add_subcommand("kappa", "inter-annotator agreement (Fleiss kappa)");
  std::string kappa_input;
  Common kappa_common;
  kappa_cmd->add_option("input", kappa_input, "annotations JSONL")->required();
  add_common(kappa_cmd, kappa_common);
  kappa_cmd->callback([&] { run_kappa(kappa_input, kappa_common); });

  // distribution
  auto* dist_cmd =
      app.add_subcommand("distribution", "label distribution after aggregation");
  std::string dist_input;
  bool dist_raw = false;
  Common dist_common;
  dist_cmd->add_option("input", dist_input, "annotations JSONL")->required();
  dist_cmd->add_flag("--raw", dist_raw, "pool raw annotator votes instead");
  add_common(dist_cmd, dist_common);
  dist_cmd->callback([&] { run_distribution(dist_input, dist_raw, dist_common); });

  // cooccurrence
  auto* cooc_cmd = app.add_subcommand(
      "cooccurrence", "intent pairs inside multi-intent items");
  std::string cooc_input;
  Common cooc_common;
  cooc_cmd->add_option("input", cooc_input, "annotations JSONL")->required();
  add_common(cooc_cmd, cooc_common);
  cooc_cmd->callback([&] { run_cooccurrence(cooc_input, cooc_common); });

  // behavior
  auto* behavior_cmd = app.add_subcommand(
      "behavior", "per-intent session measures with significance tests");
  std::string behavior_input, behavior_by = "intent";
  double behavior_threshold = metrics::kSatisfiedDwellSeconds;
  bool behavior_reasons = false;
  Common behavior_common;
  behavior_cmd->add_option("input", behavior_input, "sessions JSONL")->required();
  behavior_cmd->add_option("--by", behavior_by, "grouping key (intent)");
  behavior_cmd->add_option("--threshold", behavior_threshold,
                           "satisfied-click dwell threshold in seconds");
  behavior_cmd->add_flag("--reasons", behavior_reasons,
                         "report click reasons instead of measures");
  add_common(behavior_cmd, behavior_common);
  behavior_cmd->callback([&] {
    run_behavior(behavior_input, behavior_by, behavior_threshold, behavior_reasons,
                 behavior_common);
  });

  // correlate
  auto* correlate_cmd = app.add_subcommand(
      "correlate", "online metrics against graded satisfaction");
  std::string correlate_input;
  Common correlate_common;
  correlate_cmd->add_option("input", correlate_input, "sessions JSONL")->required();
  add_common(correlate_cmd, correlate_common);
  correlate_cmd->callback([&] { run_correlate(correlate_input, correlate_common); });

  // sat
  auto* sat_cmd = app.add_subcommand(
      "sat", "cross-validated satisfaction prediction");
  std::string sat_input, sat_mode = "both", sat_groups = "click,hover,dwell,query";
  int sat_folds = 5;
  boosting::BoostParams sat_boost;
  sat_boost.n_trees = 100;
  sat_boost.max_depth = 3;
  Common sat_common;
  sat_cmd->add_option("input", sat_input, "sessions or instances JSONL")->required();
  sat_cmd->add_option("--mode", sat_mode, "agnostic, aware, or both")
      ->check(CLI::IsMember({"agnostic", "aware", "both"}));
  sat_cmd->add_option("--groups", sat_groups, "feature groups, comma separated");
  sat_cmd->add_option("--folds", sat_folds, "cross-validation folds");
  sat_cmd->add_option("--trees", sat_boost.n_trees, "boosting rounds");
  sat_cmd->add_option("--lr", sat_boost.learning_rate, "learning rate");
  sat_cmd->add_option("--depth", sat_boost.max_depth, "tree depth");
  sat_cmd->add_option("--min-leaf", sat_boost.min_samples_leaf, "min samples per leaf");
  sat_cmd->add_option("--subsample", sat_boost.subsample, "row fraction per tree");
  add_common(sat_cmd, sat_common);
  sat_cmd->callback([&] {
    run_sat(sat_input, sat_mode, sat_groups, sat_folds, sat_boost, sat_common);
  });

  // rank
  auto* rank_cmd = app.add_subcommand(
      "rank", "cross-validated learning to rank");
  std::string rank_input, rank_algo = "all", rank_mode = "both";
  int rank_folds = 5, rank_ndcg_k = 10, adarank_rounds = 100, rankboost_rounds = 300;
  double rank_val_fraction = 0.1;
  boosting::BoostParams rank_boost;
  rank_boost.n_trees = 100;
  rank_boost.max_depth = 3;
  Common rank_common;
  rank_cmd->add_option("input", rank_input, "ranking instances JSONL")->required();
  rank_cmd->add_option("--algo", rank_algo,
                       "adarank, rankboost, lambdamart, or all")
      ->check(CLI::IsMember({"adarank", "rankboost", "lambdamart", "all"}));
  rank_cmd->add_option("--mode", rank_mode, "agnostic, aware, or both")
      ->check(CLI::IsMember({"agnostic", "aware", "both"}));
  rank_cmd->add_option("--folds", rank_folds, "cross-validation folds");
  rank_cmd->add_option("--val-fraction", rank_val_fraction,
                       "share of training sessions held out for validation");
  rank_cmd->add_option("--ndcg-k", rank_ndcg_k, "cutoff optimized during training");
  rank_cmd->add_option("--adarank-rounds", adarank_rounds, "AdaRank round cap");
  rank_cmd->add_option("--rankboost-rounds", rankboost_rounds, "RankBoost rounds");
  rank_cmd->add_option("--trees", rank_boost.n_trees, "LambdaMART boosting rounds");
  rank_cmd->add_option("--lr", rank_boost.learning_rate, "LambdaMART learning rate");
  rank_cmd->add_option("--depth", rank_boost.max_depth, "LambdaMART tree depth");
  add_common(rank_cmd, rank_common);
  rank_cmd->callback([&] {
    run_rank(rank_input, rank_algo, rank_mode, rank_folds, rank_val_fraction,
             rank_ndcg_k, adarank_rounds, rankboost_rounds, rank_boost, rank_common);
  });

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate calibrated synthetic logs or ranking data");
  std::string synth_profile = "profiles/intent_profiles.json";
  std::string synth_mix, synth_out, synth_corpus_out;
  std::size_t synth_n = 100, synth_queries = 400;
  int synth_users = 12, synth_docs = 10;
  double synth_noise = 0.1;
  bool synth_ranking = false;
  Common synth_common;
  synth_cmd->add_option("--profile", synth_profile, "profile JSON path");
  synth_cmd->add_option("--n", synth_n, "number of sessions");
  synth_cmd->add_option("--mix", synth_mix, "intent mix, e.g. PC=0.5,Ch=0.5");
  synth_cmd->add_option("--out", synth_out, "output JSONL path")->required();
  synth_cmd->add_option("--users", synth_users, "size of the synthetic user pool");
  synth_cmd->add_flag("--ranking", synth_ranking,
                      "emit conflicting ranking data instead of session logs");
  synth_cmd->add_option("--queries", synth_queries, "ranking: query groups");
  synth_cmd->add_option("--docs", synth_docs, "ranking: docs per query");
  synth_cmd->add_option("--noise", synth_noise, "ranking: label flip probability");
  synth_cmd->add_option("--corpus-out", synth_corpus_out,
                        "ranking: corpus index JSON path");
  add_common(synth_cmd, synth_common);
  synth_cmd->callback([&] {
    run_synth(synth_profile, synth_n, synth_mix, synth_out, synth_users, synth_ranking,
              synth_queries, synth_docs, synth_noise, synth_corpus_out, synth_common);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "internal error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
