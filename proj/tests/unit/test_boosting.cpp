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

#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "intentir/boosting.hpp"
#include "intentir/error.hpp"
#include "intentir/rng.hpp"
#include "intentir/stats.hpp"

using namespace intentir;
using boosting::BoostParams;
using boosting::FeatureMatrix;
using boosting::Loss;
using boosting::TreeEnsemble;

TEST_SUITE_BEGIN("boosting");

TEST_CASE("feature matrix stores rows and validates shape") {
  const FeatureMatrix x = FeatureMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(x.rows() == 2);
  CHECK(x.cols() == 2);
  CHECK(x.at(0, 1) == 2.0);
  CHECK(x.at(1, 0) == 3.0);
  CHECK(x.row(1) == std::vector<double>{3.0, 4.0});
  CHECK_THROWS_AS(FeatureMatrix::from_rows({}), ValidationError);
  CHECK_THROWS_AS(FeatureMatrix::from_rows({{1.0}, {1.0, 2.0}}), ValidationError);
}

TEST_CASE("parameter validation") {
  BoostParams params;
  params.n_trees = 0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = {};
  params.subsample = 0.0;
  CHECK_THROWS_AS(params.validate(), ValidationError);
  params = {};
  CHECK_NOTHROW(params.validate());
}

TEST_CASE("a single tree splits on the obvious feature") {
  const FeatureMatrix x =
      FeatureMatrix::from_rows({{0.0}, {0.0}, {1.0}, {1.0}});
  const std::vector<double> grad = {1.0, 2.0, 10.0, 12.0};
  const std::vector<double> hess(4, 1.0);
  BoostParams params;
  params.min_samples_leaf = 1;
  const boosting::RegressionTree tree =
      boosting::fit_tree(x, grad, hess, {0, 1, 2, 3}, params);
  // Leaves predict sum(grad) / sum(hess) over their rows.
  CHECK(tree.predict({0.0}) == doctest::Approx(1.5));
  CHECK(tree.predict({1.0}) == doctest::Approx(11.0));
}

TEST_CASE("leaf size minimum suppresses splits") {
  const FeatureMatrix x =
      FeatureMatrix::from_rows({{0.0}, {0.0}, {1.0}, {1.0}});
  const std::vector<double> grad = {1.0, 2.0, 10.0, 12.0};
  const std::vector<double> hess(4, 1.0);
  BoostParams params;
  params.min_samples_leaf = 3;
  const boosting::RegressionTree tree =
      boosting::fit_tree(x, grad, hess, {0, 1, 2, 3}, params);
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.predict({0.0}) == doctest::Approx(6.25));
}

TEST_CASE("loss names round-trip") {
  CHECK(boosting::loss_name(Loss::kLogistic) == "logistic");
  CHECK(boosting::parse_loss("least_squares") == Loss::kLeastSquares);
  CHECK_THROWS_AS(boosting::parse_loss("hinge"), ValidationError);
  CHECK(boosting::sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(boosting::sigmoid(30.0) == doctest::Approx(1.0));
  CHECK(boosting::sigmoid(-30.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("least squares fits a linear trend and its loss never rises") {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  for (int i = 0; i < 64; ++i) {
    const double v = static_cast<double>(i) / 63.0;
    rows.push_back({v});
    labels.push_back(3.0 * v + 2.0);
  }
  const FeatureMatrix x = FeatureMatrix::from_rows(rows);
  BoostParams params;
  params.n_trees = 60;
  params.max_depth = 3;
  params.min_samples_leaf = 2;
  boosting::FitReport report;
  const TreeEnsemble model =
      boosting::gbdt_fit(x, labels, Loss::kLeastSquares, params, &report);
  CHECK(model.n_trees() == 60);
  CHECK(model.base_score() == doctest::Approx(3.5));
  REQUIRE(report.loss_curve.size() == 60);
  for (std::size_t i = 1; i < report.loss_curve.size(); ++i) {
    CHECK(report.loss_curve[i] <= report.loss_curve[i - 1] + 1e-12);
  }
  const std::vector<double> pred = model.predict_raw(x);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    CHECK(pred[i] == doctest::Approx(labels[i]).epsilon(0.05));
  }
}

TEST_CASE("logistic loss separates a labeled cloud") {
  Rng rng(7);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  for (int i = 0; i < 200; ++i) {
    const double y = i % 2 == 0 ? 1.0 : 0.0;
    const double shift = y > 0.5 ? 1.0 : -1.0;
    rows.push_back({shift + 0.3 * rng.normal(), rng.normal()});
    labels.push_back(y);
  }
  const FeatureMatrix x = FeatureMatrix::from_rows(rows);
  BoostParams params;
  params.n_trees = 50;
  params.max_depth = 3;
  const TreeEnsemble model = boosting::gbdt_fit(x, labels, Loss::kLogistic, params);
  const std::vector<double> proba = model.predict_proba(x);
  std::vector<int> truth;
  for (double y : labels) truth.push_back(y > 0.5 ? 1 : 0);
  CHECK(stats::roc_auc(truth, proba) > 0.97);
}

TEST_CASE("logistic labels must be binary") {
  const FeatureMatrix x = FeatureMatrix::from_rows({{0.0}, {1.0}});
  CHECK_THROWS_AS(boosting::gbdt_fit(x, {0.0, 0.5}, Loss::kLogistic, {}),
                  ValidationError);
}

TEST_CASE("serialization round-trips bit-exactly") {
  Rng rng(11);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  for (int i = 0; i < 120; ++i) {
    rows.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    labels.push_back(rows.back()[0] > 0.5 ? 1.0 : 0.0);
  }
  const FeatureMatrix x = FeatureMatrix::from_rows(rows);
  BoostParams params;
  params.n_trees = 12;
  params.max_depth = 3;
  const TreeEnsemble model = boosting::gbdt_fit(x, labels, Loss::kLogistic, params);
  const TreeEnsemble copy = TreeEnsemble::from_json(model.to_json());
  CHECK(copy.n_trees() == model.n_trees());
  CHECK(copy.loss() == model.loss());
  for (const auto& row : rows) {
    CHECK(copy.predict_raw(row) == model.predict_raw(row));
  }
}

TEST_CASE("serialization rejects foreign documents") {
  nlohmann::json bad = {{"kind", "linear"}, {"format_version", 1}};
  CHECK_THROWS_AS(TreeEnsemble::from_json(bad), ValidationError);
  const TreeEnsemble model = boosting::gbdt_fit(
      FeatureMatrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}, {5.0}}),
      {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}, Loss::kLeastSquares, {});
  nlohmann::json stale = model.to_json();
  stale["format_version"] = 999;
  CHECK_THROWS_AS(TreeEnsemble::from_json(stale), ValidationError);
}

TEST_CASE("subsampling is reproducible per seed") {
  Rng rng(3);
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  for (int i = 0; i < 150; ++i) {
    rows.push_back({rng.uniform(), rng.uniform()});
    labels.push_back(2.0 * rows.back()[0] - rows.back()[1]);
  }
  const FeatureMatrix x = FeatureMatrix::from_rows(rows);
  BoostParams params;
  params.n_trees = 10;
  params.subsample = 0.6;
  params.seed = 42;
  const TreeEnsemble a = boosting::gbdt_fit(x, labels, Loss::kLeastSquares, params);
  const TreeEnsemble b = boosting::gbdt_fit(x, labels, Loss::kLeastSquares, params);
  CHECK(a.to_json() == b.to_json());
  params.seed = 43;
  const TreeEnsemble c = boosting::gbdt_fit(x, labels, Loss::kLeastSquares, params);
  CHECK(a.to_json() != c.to_json());
}

TEST_CASE("custom gradients reduce to least squares") {
  const FeatureMatrix x = FeatureMatrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}});
  const std::vector<double> labels = {0.0, 1.0, 2.0, 3.0};
  // Each point sits alone in a leaf, so the fit contracts the residual by
  // (1 - learning_rate) per round; 60 rounds leave under 0.2% of it.
  BoostParams params;
  params.n_trees = 60;
  params.min_samples_leaf = 1;
  params.max_depth = 2;
  const auto fn = [&](const std::vector<double>& scores, std::vector<double>& grad,
                      std::vector<double>& hess) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      grad[i] = labels[i] - scores[i];
      hess[i] = 1.0;
    }
  };
  const TreeEnsemble model = boosting::gbdt_fit_custom(x, fn, params);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK(model.predict_raw(x.row(i)) == doctest::Approx(labels[i]).epsilon(0.02));
  }
}

TEST_SUITE_END();
