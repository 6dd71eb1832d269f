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

#include "intentir/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "intentir/error.hpp"
#include "intentir/rng.hpp"
#include "intentir/version.hpp"

namespace intentir::boosting {

namespace {

constexpr double kMinHessian = 1e-12;
constexpr double kMinGain = 1e-12;

double leaf_weight(double sum_grad, double sum_hess) {
  return sum_grad / std::max(sum_hess, kMinHessian);
}

double node_score(double sum_grad, double sum_hess) {
  return sum_grad * sum_grad / std::max(sum_hess, kMinHessian);
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t n_rows, std::size_t n_cols)
    : n_rows_(n_rows), n_cols_(n_cols), data_(n_rows * n_cols, 0.0) {}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  require(!rows.empty(), "feature matrix needs at least one row");
  const std::size_t n_cols = rows.front().size();
  require(n_cols > 0, "feature matrix needs at least one column");
  FeatureMatrix x(rows.size(), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == n_cols, "feature matrix rows must share one width");
    for (std::size_t c = 0; c < n_cols; ++c) x.set(r, c, rows[r][c]);
  }
  return x;
}

std::vector<double> FeatureMatrix::row(std::size_t r) const {
  std::vector<double> out(n_cols_);
  for (std::size_t c = 0; c < n_cols_; ++c) out[c] = at(r, c);
  return out;
}

void BoostParams::validate() const {
  require(n_trees >= 1, "boosting: n_trees must be >= 1");
  require(learning_rate > 0.0 && learning_rate <= 2.0,
          "boosting: learning_rate must lie in (0, 2]");
  require(max_depth >= 1, "boosting: max_depth must be >= 1");
  require(min_samples_leaf >= 1, "boosting: min_samples_leaf must be >= 1");
  require(subsample > 0.0 && subsample <= 1.0, "boosting: subsample must lie in (0, 1]");
}

double RegressionTree::predict(const std::vector<double>& row) const {
  ensure(!nodes_.empty(), "predict on an empty tree");
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const TreeNode& node = nodes_[index];
    index = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                          : node.right;
  }
  return nodes_[index].value;
}

double RegressionTree::predict(const FeatureMatrix& x, std::size_t row) const {
  ensure(!nodes_.empty(), "predict on an empty tree");
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const TreeNode& node = nodes_[index];
    index = x.at(row, static_cast<std::size_t>(node.feature)) <= node.threshold
                ? node.left
                : node.right;
  }
  return nodes_[index].value;
}

void RegressionTree::scale(double factor) {
  for (TreeNode& node : nodes_) {
    if (node.is_leaf()) node.value *= factor;
  }
}

namespace {

// Recursive builder working on per-feature row lists that stay sorted by
// feature value, so each node scans candidate splits in one pass and splits
// cost O(features * rows) instead of a re-sort.
class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, const std::vector<double>& grad,
              const std::vector<double>& hess, const BoostParams& params)
      : x_(x), grad_(grad), hess_(hess), params_(params) {}

  std::vector<TreeNode> build(const std::vector<std::uint32_t>& rows) {
    std::vector<std::vector<std::uint32_t>> sorted(x_.cols());
    for (std::size_t c = 0; c < x_.cols(); ++c) {
      sorted[c] = rows;
      std::stable_sort(sorted[c].begin(), sorted[c].end(),
                       [&](std::uint32_t a, std::uint32_t b) {
                         return x_.at(a, c) < x_.at(b, c);
                       });
    }
    double sum_grad = 0.0, sum_hess = 0.0;
    for (std::uint32_t r : rows) {
      sum_grad += grad_[r];
      sum_hess += hess_[r];
    }
    nodes_.clear();
    grow(std::move(sorted), sum_grad, sum_hess, 1);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    double left_grad = 0.0;
    double left_hess = 0.0;
  };

  int make_leaf(double sum_grad, double sum_hess) {
    TreeNode node;
    node.value = leaf_weight(sum_grad, sum_hess);
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  Split best_split(const std::vector<std::vector<std::uint32_t>>& sorted,
                   double sum_grad, double sum_hess) const {
    Split best;
    const double parent = node_score(sum_grad, sum_hess);
    const std::size_t n = sorted.front().size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    for (std::size_t c = 0; c < sorted.size(); ++c) {
      const std::vector<std::uint32_t>& order = sorted[c];
      double left_grad = 0.0, left_hess = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_grad += grad_[order[i]];
        left_hess += hess_[order[i]];
        const double here = x_.at(order[i], c);
        const double next = x_.at(order[i + 1], c);
        if (here == next) continue;  // no boundary between equal values
        const std::size_t left_count = i + 1;
        if (left_count < min_leaf || n - left_count < min_leaf) continue;
        const double gain = node_score(left_grad, left_hess) +
                            node_score(sum_grad - left_grad, sum_hess - left_hess) -
                            parent;
        if (gain > best.gain) {
          best.feature = static_cast<int>(c);
          best.threshold = here;  // rule: value <= threshold goes left
          best.gain = gain;
          best.left_grad = left_grad;
          best.left_hess = left_hess;
        }
      }
    }
    return best;
  }

  int grow(std::vector<std::vector<std::uint32_t>>&& sorted, double sum_grad,
           double sum_hess, int depth) {
    const std::size_t n = sorted.front().size();
    if (depth > params_.max_depth ||
        n < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) {
      return make_leaf(sum_grad, sum_hess);
    }
    const Split split = best_split(sorted, sum_grad, sum_hess);
    if (split.feature < 0 || split.gain <= kMinGain) {
      return make_leaf(sum_grad, sum_hess);
    }

    const auto goes_left = [&](std::uint32_t r) {
      return x_.at(r, static_cast<std::size_t>(split.feature)) <= split.threshold;
    };
    std::vector<std::vector<std::uint32_t>> left_sorted(sorted.size());
    std::vector<std::vector<std::uint32_t>> right_sorted(sorted.size());
    for (std::size_t c = 0; c < sorted.size(); ++c) {
      for (std::uint32_t r : sorted[c]) {
        (goes_left(r) ? left_sorted[c] : right_sorted[c]).push_back(r);
      }
    }
    sorted.clear();

    const int index = static_cast<int>(nodes_.size());
    TreeNode node;
    node.feature = split.feature;
    node.threshold = split.threshold;
    nodes_.push_back(node);
    const int left = grow(std::move(left_sorted), split.left_grad, split.left_hess,
                          depth + 1);
    const int right = grow(std::move(right_sorted), sum_grad - split.left_grad,
                           sum_hess - split.left_hess, depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  const FeatureMatrix& x_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  const BoostParams& params_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree fit_tree(const FeatureMatrix& x, const std::vector<double>& grad,
                        const std::vector<double>& hess,
                        const std::vector<std::uint32_t>& rows,
                        const BoostParams& params) {
  params.validate();
  require(x.rows() > 0 && x.cols() > 0, "fit_tree: empty matrix");
  require(grad.size() == x.rows() && hess.size() == x.rows(),
          "fit_tree: gradient length mismatch");
  require(!rows.empty(), "fit_tree: no rows selected");
  for (std::uint32_t r : rows) {
    require(r < x.rows(), "fit_tree: row index out of range");
    require(hess[r] >= 0.0, "fit_tree: negative hessian");
  }
  TreeBuilder builder(x, grad, hess, params);
  return RegressionTree(builder.build(rows));
}

std::string_view loss_name(Loss loss) {
  switch (loss) {
    case Loss::kLeastSquares:
      return "least_squares";
    case Loss::kLogistic:
      return "logistic";
  }
  throw InternalError("unknown loss");
}

Loss parse_loss(std::string_view text) {
  if (text == "least_squares") return Loss::kLeastSquares;
  if (text == "logistic") return Loss::kLogistic;
  throw ValidationError("unknown loss: " + std::string(text));
}

double sigmoid(double value) {
  if (value >= 0.0) {
    return 1.0 / (1.0 + std::exp(-value));
  }
  const double e = std::exp(value);
  return e / (1.0 + e);
}

double TreeEnsemble::predict_raw(const std::vector<double>& row) const {
  require(row.size() == n_features_, "predict: feature count mismatch");
  double score = base_score_;
  for (const RegressionTree& tree : trees_) score += tree.predict(row);
  return score;
}

std::vector<double> TreeEnsemble::predict_raw(const FeatureMatrix& x) const {
  require(x.cols() == n_features_, "predict: feature count mismatch");
  std::vector<double> scores(x.rows(), base_score_);
  for (const RegressionTree& tree : trees_) {
    for (std::size_t r = 0; r < x.rows(); ++r) scores[r] += tree.predict(x, r);
  }
  return scores;
}

double TreeEnsemble::predict_proba(const std::vector<double>& row) const {
  return sigmoid(predict_raw(row));
}

std::vector<double> TreeEnsemble::predict_proba(const FeatureMatrix& x) const {
  std::vector<double> scores = predict_raw(x);
  for (double& s : scores) s = sigmoid(s);
  return scores;
}

nlohmann::json TreeEnsemble::to_json() const {
  nlohmann::json model;
  model["format_version"] = kModelFormatVersion;
  model["kind"] = "gbdt";
  model["loss"] = std::string(loss_name(loss_));
  model["base_score"] = base_score_;
  model["n_features"] = n_features_;
  nlohmann::json trees = nlohmann::json::array();
  for (const RegressionTree& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree.nodes()) {
      nodes.push_back({{"feature", node.feature},
                       {"threshold", node.threshold},
                       {"left", node.left},
                       {"right", node.right},
                       {"value", node.value}});
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  model["trees"] = std::move(trees);
  return model;
}

TreeEnsemble TreeEnsemble::from_json(const nlohmann::json& value) {
  require(value.is_object() && value.value("kind", "") == "gbdt",
          "gbdt model: wrong document kind");
  require(value.value("format_version", -1) == kModelFormatVersion,
          "gbdt model: unsupported format version");
  TreeEnsemble ensemble;
  ensemble.loss_ = parse_loss(value.at("loss").get<std::string>());
  ensemble.base_score_ = value.at("base_score").get<double>();
  ensemble.n_features_ = value.at("n_features").get<std::size_t>();
  for (const auto& tree_json : value.at("trees")) {
    std::vector<TreeNode> nodes;
    for (const auto& node_json : tree_json.at("nodes")) {
      TreeNode node;
      node.feature = node_json.at("feature").get<int>();
      node.threshold = node_json.at("threshold").get<double>();
      node.left = node_json.at("left").get<int>();
      node.right = node_json.at("right").get<int>();
      node.value = node_json.at("value").get<double>();
      require(node.feature < static_cast<int>(ensemble.n_features_),
              "gbdt model: node references a missing feature");
      nodes.push_back(node);
    }
    require(!nodes.empty(), "gbdt model: empty tree");
    ensemble.trees_.emplace_back(std::move(nodes));
  }
  return ensemble;
}

namespace {

std::vector<std::uint32_t> sample_rows(std::size_t n, double subsample, Rng& rng) {
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0u);
  if (subsample >= 1.0) return rows;
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(subsample * static_cast<double>(n))));
  rng.shuffle(rows);
  rows.resize(keep);
  std::sort(rows.begin(), rows.end());
  return rows;
}

class GbdtCore {
 public:
  GbdtCore(const FeatureMatrix& x, const BoostParams& params, double base_score)
      : x_(x), params_(params), rng_(params.seed), scores_(x.rows(), base_score) {}

  const std::vector<double>& scores() const { return scores_; }

  RegressionTree boost_round(const std::vector<double>& grad,
                             const std::vector<double>& hess) {
    const std::vector<std::uint32_t> rows =
        sample_rows(x_.rows(), params_.subsample, rng_);
    RegressionTree tree = fit_tree(x_, grad, hess, rows, params_);
    tree.scale(params_.learning_rate);
    for (std::size_t r = 0; r < x_.rows(); ++r) scores_[r] += tree.predict(x_, r);
    return tree;
  }

 private:
  const FeatureMatrix& x_;
  const BoostParams& params_;
  Rng rng_;
  std::vector<double> scores_;
};

}  // namespace

// Private-access shim matched by the friend declaration on TreeEnsemble.
class GbdtTrainer {
 public:
  static TreeEnsemble make(std::size_t n_features, double base_score, Loss loss) {
    TreeEnsemble ensemble;
    ensemble.n_features_ = n_features;
    ensemble.base_score_ = base_score;
    ensemble.loss_ = loss;
    return ensemble;
  }
  static void add_tree(TreeEnsemble& ensemble, RegressionTree tree) {
    ensemble.trees_.push_back(std::move(tree));
  }
};

TreeEnsemble gbdt_fit(const FeatureMatrix& x, const std::vector<double>& labels,
                      Loss loss, const BoostParams& params, FitReport* report) {
  params.validate();
  require(x.rows() > 0 && x.cols() > 0, "gbdt_fit: empty matrix");
  require(labels.size() == x.rows(), "gbdt_fit: label count mismatch");

  const std::size_t n = x.rows();
  double base_score = 0.0;
  if (loss == Loss::kLeastSquares) {
    base_score = std::accumulate(labels.begin(), labels.end(), 0.0) /
                 static_cast<double>(n);
  } else {
    for (double y : labels) {
      require(y == 0.0 || y == 1.0, "gbdt_fit: logistic labels must be 0 or 1");
    }
    double mean = std::accumulate(labels.begin(), labels.end(), 0.0) /
                  static_cast<double>(n);
    mean = std::clamp(mean, 1e-6, 1.0 - 1e-6);
    base_score = std::log(mean / (1.0 - mean));
  }

  TreeEnsemble ensemble = GbdtTrainer::make(x.cols(), base_score, loss);

  GbdtCore core(x, params, base_score);
  std::vector<double> grad(n), hess(n);
  for (int round = 0; round < params.n_trees; ++round) {
    const std::vector<double>& scores = core.scores();
    if (loss == Loss::kLeastSquares) {
      for (std::size_t i = 0; i < n; ++i) {
        grad[i] = labels[i] - scores[i];
        hess[i] = 1.0;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = sigmoid(scores[i]);
        grad[i] = labels[i] - p;
        hess[i] = std::max(p * (1.0 - p), 1e-16);
      }
    }
    GbdtTrainer::add_tree(ensemble, core.boost_round(grad, hess));
    if (report) {
      const std::vector<double>& updated = core.scores();
      double total = 0.0;
      if (loss == Loss::kLeastSquares) {
        for (std::size_t i = 0; i < n; ++i) {
          const double d = labels[i] - updated[i];
          total += d * d;
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          const double p = std::clamp(sigmoid(updated[i]), 1e-15, 1.0 - 1e-15);
          total -= labels[i] > 0.5 ? std::log(p) : std::log1p(-p);
        }
      }
      report->loss_curve.push_back(total / static_cast<double>(n));
    }
  }
  return ensemble;
}

TreeEnsemble gbdt_fit_custom(const FeatureMatrix& x, const GradHessFn& fn,
                             const BoostParams& params, double base_score) {
  params.validate();
  require(x.rows() > 0 && x.cols() > 0, "gbdt_fit_custom: empty matrix");
  require(static_cast<bool>(fn), "gbdt_fit_custom: missing gradient function");

  TreeEnsemble ensemble =
      GbdtTrainer::make(x.cols(), base_score, Loss::kLeastSquares);

  GbdtCore core(x, params, base_score);
  std::vector<double> grad(x.rows()), hess(x.rows());
  for (int round = 0; round < params.n_trees; ++round) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(hess.begin(), hess.end(), 0.0);
    fn(core.scores(), grad, hess);
    require(grad.size() == x.rows() && hess.size() == x.rows(),
            "gbdt_fit_custom: gradient function resized its outputs");
    GbdtTrainer::add_tree(ensemble, core.boost_round(grad, hess));
  }
  return ensemble;
}

}  // namespace intentir::boosting
