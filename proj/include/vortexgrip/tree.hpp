#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace vortexgrip {

/// Dense row-major design matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  void push_row(const std::vector<double>& values);
};

struct TreeParams {
  int max_depth = 12;
  int min_samples_leaf = 1;
  /// Share of features considered at each split, rounded to a count >= 1.
  double feature_fraction = 1.0;
};

/// Internal nodes carry feature >= 0 and route x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool operator==(const TreeNode&) const = default;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double predict(const double* x) const;
  double predict(const std::vector<double>& x) const { return predict(x.data()); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;

  bool operator==(const RegressionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Weighted CART with variance-reduction splits. Rows with zero weight are
/// ignored; an empty weight vector means unit weights.
RegressionTree fit_tree(const FeatureMatrix& x, const std::vector<double>& y, const std::vector<double>& weights,
                        const TreeParams& params, std::uint64_t seed);

struct ForestParams {
  int n_trees = 200;
  int max_depth = 12;
  int min_samples_leaf = 1;
  double feature_fraction = 0.75;
  bool bootstrap = true;

  bool operator==(const ForestParams&) const = default;
};

struct RandomForest {
  std::vector<RegressionTree> trees;
  double predict(const double* x) const;
  bool operator==(const RandomForest&) const = default;
};

RandomForest fit_forest(const FeatureMatrix& x, const std::vector<double>& y, const ForestParams& params,
                        std::uint64_t seed, unsigned threads = 0);

enum class BoostLoss { Linear, Square, Exponential };

std::string_view to_string(BoostLoss loss);
BoostLoss parse_boost_loss(std::string_view text);

struct BoostParams {
  int n_stages = 100;
  int max_depth = 6;
  int min_samples_leaf = 1;
  BoostLoss loss = BoostLoss::Linear;

  bool operator==(const BoostParams&) const = default;
};

/// AdaBoost.R2: prediction is the weighted median of the stage outputs.
struct AdaBoostR2 {
  std::vector<RegressionTree> stages;
  std::vector<double> stage_weights;
  double predict(const double* x) const;
  bool operator==(const AdaBoostR2&) const = default;
};

AdaBoostR2 fit_adaboost(const FeatureMatrix& x, const std::vector<double>& y, const BoostParams& params,
                        std::uint64_t seed);

/// First value whose cumulative weight (values sorted ascending) reaches half
/// the total weight.
double weighted_median(std::vector<double> values, std::vector<double> weights);

}  // namespace vortexgrip
