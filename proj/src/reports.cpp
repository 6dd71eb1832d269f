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

#include "intentir/reports.hpp"

#include <cstdio>
#include <ostream>

#include "intentir/error.hpp"
#include "intentir/version.hpp"

namespace intentir::reports {

std::string_view format_name(Format format) {
  switch (format) {
    case Format::kCsv:
      return "csv";
    case Format::kJson:
      return "json";
  }
  throw InternalError("unknown format");
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  throw ValidationError("unknown report format: " + std::string(text));
}

std::string config_digest(const nlohmann::json& config) {
  const std::string canonical = config.dump();
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char byte : canonical) {
    hash ^= byte;
    hash *= 0x100000001b3ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

std::string fmt_opt(const std::optional<double>& value) {
  return value ? fmt(*value) : std::string("NA");
}

std::string_view stars(double p_value) {
  if (p_value < 0.001) return "***";
  if (p_value < 0.01) return "**";
  if (p_value < 0.05) return "*";
  return "";
}

namespace {

void write_csv_meta(std::ostream& out, const Meta& meta) {
  out << "# intentir " << kVersion << "\n";
  out << "# seed " << meta.seed << "\n";
  out << "# config " << config_digest(meta.config) << "\n";
}

nlohmann::json meta_json(const Meta& meta) {
  nlohmann::json value;
  value["version"] = std::string(kVersion);
  value["seed"] = meta.seed;
  value["config"] = config_digest(meta.config);
  return value;
}

nlohmann::json opt_json(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

void dump_json(std::ostream& out, const nlohmann::json& body) {
  out << body.dump(2) << "\n";
}

}  // namespace

void render_distribution(std::ostream& out, const taxonomy::LabelDistribution& dist,
                         Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["total"] = dist.total;
    nlohmann::json rows = nlohmann::json::array();
    for (taxonomy::Label label : taxonomy::kAllLabels) {
      const auto i = static_cast<std::size_t>(label);
      rows.push_back({{"label", std::string(taxonomy::code(label))},
                      {"count", dist.counts[i]},
                      {"share", dist.share[i]}});
    }
    body["labels"] = std::move(rows);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "label,count,share\n";
  for (taxonomy::Label label : taxonomy::kAllLabels) {
    const auto i = static_cast<std::size_t>(label);
    out << taxonomy::code(label) << "," << dist.counts[i] << ","
        << fmt(dist.share[i]) << "\n";
  }
  out << "total," << dist.total << "," << fmt(1.0) << "\n";
}

void render_cooccurrence(std::ostream& out, const taxonomy::CooccurrenceMatrix& matrix,
                         Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["pair_count"] = matrix.pair_count;
    body["skipped_items"] = matrix.skipped_items;
    nlohmann::json share = nlohmann::json::array();
    for (const auto& row : matrix.share) {
      nlohmann::json cells = nlohmann::json::array();
      for (double cell : row) cells.push_back(cell);
      share.push_back(std::move(cells));
    }
    body["share"] = std::move(share);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "# pair_count " << matrix.pair_count << "\n";
  out << "# skipped_items " << matrix.skipped_items << "\n";
  out << "intent";
  for (taxonomy::Intent intent : taxonomy::kAllIntents) {
    out << "," << taxonomy::code(intent);
  }
  out << "\n";
  for (std::size_t a = 0; a < matrix.share.size(); ++a) {
    out << taxonomy::code(static_cast<taxonomy::Intent>(a));
    for (double cell : matrix.share[a]) out << "," << fmt(cell);
    out << "\n";
  }
}

void render_kappa(std::ostream& out, double kappa, std::size_t n_items,
                  std::size_t n_raters, Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["kappa"] = kappa;
    body["n_items"] = n_items;
    body["n_raters"] = n_raters;
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "kappa,n_items,n_raters\n";
  out << fmt(kappa) << "," << n_items << "," << n_raters << "\n";
}

void render_measure_tests(std::ostream& out,
                          const std::vector<std::string>& group_names,
                          const std::vector<metrics::MeasureTestRow>& rows,
                          Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["groups"] = group_names;
    nlohmann::json measures = nlohmann::json::array();
    for (const metrics::MeasureTestRow& row : rows) {
      nlohmann::json entry;
      entry["measure"] = row.measure;
      nlohmann::json means = nlohmann::json::array();
      for (const auto& mean : row.group_means) means.push_back(opt_json(mean));
      entry["means"] = std::move(means);
      entry["sizes"] = row.group_sizes;
      entry["tested"] = row.tested;
      if (row.tested) {
        entry["h"] = row.test.statistic;
        entry["p"] = row.test.p_value;
        entry["p_holm"] = row.p_adjusted;
        entry["signif"] = std::string(stars(row.p_adjusted));
      }
      measures.push_back(std::move(entry));
    }
    body["measures"] = std::move(measures);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "measure,group,mean,n,kw_h,kw_p,p_holm,signif\n";
  for (const metrics::MeasureTestRow& row : rows) {
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      out << row.measure << "," << group_names[g] << "," << fmt_opt(row.group_means[g])
          << "," << row.group_sizes[g] << ",";
      if (row.tested) {
        out << fmt(row.test.statistic) << "," << fmt(row.test.p_value) << ","
            << fmt(row.p_adjusted) << "," << stars(row.p_adjusted);
      } else {
        out << "NA,NA,NA,";
      }
      out << "\n";
    }
  }
}

void render_correlations(std::ostream& out,
                         const std::vector<metrics::CorrelationRow>& rows,
                         Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    nlohmann::json metrics_json = nlohmann::json::array();
    for (const metrics::CorrelationRow& row : rows) {
      nlohmann::json entry;
      entry["metric"] = row.metric;
      entry["n"] = row.n_pairs;
      entry["tested"] = row.tested;
      if (row.tested) {
        entry["r"] = row.pearson.statistic;
        entry["p"] = row.pearson.p_value;
        entry["signif"] = std::string(stars(row.pearson.p_value));
      }
      metrics_json.push_back(std::move(entry));
    }
    body["metrics"] = std::move(metrics_json);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "metric,n,r,p,signif\n";
  for (const metrics::CorrelationRow& row : rows) {
    out << row.metric << "," << row.n_pairs << ",";
    if (row.tested) {
      out << fmt(row.pearson.statistic) << "," << fmt(row.pearson.p_value) << ","
          << stars(row.pearson.p_value);
    } else {
      out << "NA,NA,";
    }
    out << "\n";
  }
}

void render_click_reasons(std::ostream& out, const metrics::ClickReasonReport& report,
                          Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    nlohmann::json intents = nlohmann::json::array();
    for (std::size_t i = 0; i < report.share.size(); ++i) {
      nlohmann::json entry;
      entry["intent"] = std::string(taxonomy::code(static_cast<taxonomy::Intent>(i)));
      entry["n_users"] = report.n_users[i];
      nlohmann::json shares;
      for (std::size_t r = 0; r < report.share[i].size(); ++r) {
        shares[std::string(logs::reason_name(static_cast<logs::ClickReason>(r)))] =
            report.share[i][r];
      }
      entry["share"] = std::move(shares);
      intents.push_back(std::move(entry));
    }
    body["intents"] = std::move(intents);
    nlohmann::json tests = nlohmann::json::array();
    for (std::size_t r = 0; r < report.anova.size(); ++r) {
      nlohmann::json entry;
      entry["reason"] = std::string(logs::reason_name(static_cast<logs::ClickReason>(r)));
      entry["tested"] = report.tested[r];
      if (report.tested[r]) {
        entry["f"] = report.anova[r].statistic;
        entry["p"] = report.anova[r].p_value;
        entry["signif"] = std::string(stars(report.anova[r].p_value));
      }
      tests.push_back(std::move(entry));
    }
    body["anova"] = std::move(tests);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "intent,n_users";
  for (logs::ClickReason reason : logs::kAllClickReasons) {
    out << "," << logs::reason_name(reason);
  }
  out << "\n";
  for (std::size_t i = 0; i < report.share.size(); ++i) {
    out << taxonomy::code(static_cast<taxonomy::Intent>(i)) << "," << report.n_users[i];
    for (double share : report.share[i]) out << "," << fmt(share);
    out << "\n";
  }
  out << "anova,f";
  for (logs::ClickReason reason : logs::kAllClickReasons) {
    const auto r = static_cast<std::size_t>(reason);
    out << "," << (report.tested[r] ? fmt(report.anova[r].statistic) : "NA");
  }
  out << "\n";
  out << "anova,p";
  for (logs::ClickReason reason : logs::kAllClickReasons) {
    const auto r = static_cast<std::size_t>(reason);
    out << "," << (report.tested[r] ? fmt(report.anova[r].p_value) : "NA");
  }
  out << "\n";
}

void render_sat_results(
    std::ostream& out,
    const std::vector<std::pair<std::string, sat::ExperimentResult>>& results,
    Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    nlohmann::json settings = nlohmann::json::array();
    for (const auto& [name, result] : results) {
      nlohmann::json entry;
      entry["setting"] = name;
      entry["mean_auc"] = result.mean_auc;
      nlohmann::json folds = nlohmann::json::array();
      for (const sat::FoldResult& fold : result.folds) {
        folds.push_back({{"auc", fold.auc},
                         {"n_train", fold.n_train},
                         {"n_test", fold.n_test}});
      }
      entry["folds"] = std::move(folds);
      settings.push_back(std::move(entry));
    }
    body["settings"] = std::move(settings);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "setting,scope,auc,n_train,n_test\n";
  for (const auto& [name, result] : results) {
    for (std::size_t f = 0; f < result.folds.size(); ++f) {
      out << name << ",fold" << (f + 1) << "," << fmt(result.folds[f].auc) << ","
          << result.folds[f].n_train << "," << result.folds[f].n_test << "\n";
    }
    out << name << ",mean," << fmt(result.mean_auc) << ",,\n";
  }
}

namespace {

void cv_metric_cells(std::ostream& out, const ltr::RankMetrics& metrics) {
  out << fmt(metrics.ndcg5) << "," << fmt(metrics.ndcg10) << "," << fmt(metrics.ndcg15)
      << "," << fmt(metrics.map);
}

nlohmann::json cv_metric_json(const ltr::RankMetrics& metrics) {
  return {{"ndcg5", metrics.ndcg5},
          {"ndcg10", metrics.ndcg10},
          {"ndcg15", metrics.ndcg15},
          {"map", metrics.map}};
}

}  // namespace

void render_cv_results(
    std::ostream& out, const std::vector<std::pair<std::string, ltr::CvResult>>& results,
    Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    nlohmann::json settings = nlohmann::json::array();
    for (const auto& [name, result] : results) {
      nlohmann::json entry;
      entry["setting"] = name;
      entry["n_queries"] = result.n_queries;
      entry["mean"] = cv_metric_json(result.mean);
      nlohmann::json folds = nlohmann::json::array();
      for (const ltr::RankMetrics& fold : result.per_fold) {
        folds.push_back(cv_metric_json(fold));
      }
      entry["folds"] = std::move(folds);
      settings.push_back(std::move(entry));
    }
    body["settings"] = std::move(settings);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "setting,scope,ndcg5,ndcg10,ndcg15,map\n";
  for (const auto& [name, result] : results) {
    for (std::size_t f = 0; f < result.per_fold.size(); ++f) {
      out << name << ",fold" << (f + 1) << ",";
      cv_metric_cells(out, result.per_fold[f]);
      out << "\n";
    }
    out << name << ",mean,";
    cv_metric_cells(out, result.mean);
    out << "\n";
  }
}

void render_ranking_scores(std::ostream& out,
                           const std::vector<ltr::RankingInstance>& instances,
                           const std::vector<double>& scores, Format format,
                           const Meta& meta) {
  require(instances.size() == scores.size(), "render_ranking_scores: size mismatch");
  const ltr::RankMetrics metrics = ltr::evaluate_ranking(instances, scores);
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["metrics"] = cv_metric_json(metrics);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < instances.size(); ++i) {
      rows.push_back({{"query_id", instances[i].query_id},
                      {"doc_id", instances[i].doc_id},
                      {"relevance", instances[i].relevance},
                      {"score", scores[i]}});
    }
    body["scores"] = std::move(rows);
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "# ndcg5 " << fmt(metrics.ndcg5) << "\n";
  out << "# ndcg10 " << fmt(metrics.ndcg10) << "\n";
  out << "# ndcg15 " << fmt(metrics.ndcg15) << "\n";
  out << "# map " << fmt(metrics.map) << "\n";
  out << "query_id,doc_id,relevance,score\n";
  for (std::size_t i = 0; i < instances.size(); ++i) {
    out << instances[i].query_id << "," << instances[i].doc_id << ","
        << instances[i].relevance << "," << fmt(scores[i]) << "\n";
  }
}

void render_split_summary(std::ostream& out, const logs::SplitReport& report,
                          std::size_t sessions_kept, Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["n_events"] = report.n_events;
    body["n_sessions"] = report.n_sessions;
    body["orphan_events"] = report.orphan_events;
    body["unmatched_hover_exits"] = report.unmatched_hover_exits;
    body["sessions_kept"] = sessions_kept;
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "events,sessions,orphan_events,unmatched_hover_exits,sessions_kept\n";
  out << report.n_events << "," << report.n_sessions << "," << report.orphan_events
      << "," << report.unmatched_hover_exits << "," << sessions_kept << "\n";
}

void render_synth_summary(std::ostream& out, std::size_t n_sessions,
                          std::size_t n_events, Format format, const Meta& meta) {
  if (format == Format::kJson) {
    nlohmann::json body;
    body["meta"] = meta_json(meta);
    body["n_sessions"] = n_sessions;
    body["n_events"] = n_events;
    dump_json(out, body);
    return;
  }
  write_csv_meta(out, meta);
  out << "sessions,events\n";
  out << n_sessions << "," << n_events << "\n";
}

}  // namespace intentir::reports
