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

#ifndef INTENTIR_BOOSTING_HPP_
#define INTENTIR_BOOSTING_HPP_

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace intentir::boosting {

// Dense feature matrix stored column-major so tree fitting can scan one
// feature contiguously.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n_rows, std::size_t n_cols);
  static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  double at(std::size_t row, std::size_t col) const { return data_[col * n_rows_ + row]; }
  void set(std::size_t row, std::size_t col, double value) {
    data_[col * n_rows_ + row] = value;
  }
  std::vector<double> row(std::size_t r) const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> data_;
};

struct BoostParams {
  int n_trees = 300;
  double learning_rate = 0.1;
  int max_depth = 6;
  int min_samples_leaf = 5;
  double subsample = 1.0;     // row fraction per tree, (0, 1]
  std::uint64_t seed = 0;     // drives subsampling only

  void validate() const;
};

// value is the prediction for leaves; internal nodes route row[feature] <=
// threshold to the left child.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

class RegressionTree {
 public:
  explicit RegressionTree(std::vector<TreeNode> nodes = {}) : nodes_(std::move(nodes)) {}

  double predict(const std::vector<double>& row) const;
  double predict(const FeatureMatrix& x, std::size_t row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  void scale(double factor);

 private:
  std::vector<TreeNode> nodes_;
};

// Fits one tree to per-sample gradient statistics: each leaf predicts
// sum(grad) / sum(hess) over its rows and splits maximize the usual
// G_L^2/H_L + G_R^2/H_R - G^2/H gain. Only the rows listed in `rows` are
// used. For plain least squares pass grad = residuals and hess = 1.
RegressionTree fit_tree(const FeatureMatrix& x, const std::vector<double>& grad,
                        const std::vector<double>& hess,
                        const std::vector<std::uint32_t>& rows,
                        const BoostParams& params);

enum class Loss : int {
  kLeastSquares = 0,
  kLogistic = 1,
};

std::string_view loss_name(Loss loss);
Loss parse_loss(std::string_view text);

double sigmoid(double value);

// Additive tree model: prediction = base_score + sum of tree outputs (the
// learning rate is folded into the stored leaf values).
class TreeEnsemble {
 public:
  double predict_raw(const std::vector<double>& row) const;
  std::vector<double> predict_raw(const FeatureMatrix& x) const;
  double predict_proba(const std::vector<double>& row) const;
  std::vector<double> predict_proba(const FeatureMatrix& x) const;

  std::size_t n_trees() const { return trees_.size(); }
  std::size_t n_features() const { return n_features_; }
  double base_score() const { return base_score_; }
  Loss loss() const { return loss_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

  // Versioned serialization; doubles round-trip exactly.
  nlohmann::json to_json() const;
  static TreeEnsemble from_json(const nlohmann::json& value);

 private:
  friend class GbdtTrainer;
  std::vector<RegressionTree> trees_;
  double base_score_ = 0.0;
  std::size_t n_features_ = 0;
  Loss loss_ = Loss::kLeastSquares;
};

struct FitReport {
  // Training loss after each boosting round: mean squared error for least
  // squares, mean log loss for logistic.
  std::vector<double> loss_curve;
};

// Gradient boosting with the built-in losses. Logistic labels must be 0/1;
// the base score is the clamped log-odds of the label mean.
TreeEnsemble gbdt_fit(const FeatureMatrix& x, const std::vector<double>& labels,
                      Loss loss, const BoostParams& params, FitReport* report = nullptr);

// Caller-supplied gradients: fn receives the current raw scores and fills
// grad (negative gradient) and hess (positive curvature) per sample. Used
// for listwise ranking objectives.
using GradHessFn = std::function<void(const std::vector<double>& scores,
                                      std::vector<double>& grad,
                                      std::vector<double>& hess)>;

TreeEnsemble gbdt_fit_custom(const FeatureMatrix& x, const GradHessFn& fn,
                             const BoostParams& params, double base_score = 0.0);

}  // namespace intentir::boosting

#endif  // INTENTIR_BOOSTING_HPP_
