#include "vortexgrip/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vortexgrip/error.hpp"
#include "vortexgrip/parallel.hpp"
#include "vortexgrip/random.hpp"

namespace vortexgrip {

void FeatureMatrix::push_row(const std::vector<double>& values) {
  if (rows == 0 && cols == 0) cols = values.size();
  if (values.size() != cols) throw InvalidArgument("feature row has the wrong width");
  data.insert(data.end(), values.begin(), values.end());
  ++rows;
}

double RegressionTree::predict(const double* x) const {
  if (nodes_.empty()) return 0.0;
  int i = 0;
  while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
    const TreeNode& n = nodes_[static_cast<std::size_t>(i)];
    i = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[static_cast<std::size_t>(i)].value;
}

int RegressionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.feature >= 0) {
      d[static_cast<std::size_t>(n.left)] = d[i] + 1;
      d[static_cast<std::size_t>(n.right)] = d[i] + 1;
    }
    best = std::max(best, d[i]);
  }
  return best;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, const std::vector<double>& y, const std::vector<double>& w,
              const TreeParams& p, std::uint64_t seed)
      : x_(x), y_(y), w_(w), p_(p), rng_(seed) {
    const auto n = static_cast<double>(x.cols);
    n_features_ = std::clamp(static_cast<std::size_t>(std::lround(p.feature_fraction * n)), std::size_t{1}, x.cols);
  }

  std::vector<TreeNode> build(std::vector<std::size_t> rows) {
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
  };

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> f(x_.cols);
    std::iota(f.begin(), f.end(), std::size_t{0});
    if (n_features_ == x_.cols) return f;
    for (std::size_t i = 0; i < n_features_; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.uniform_index(x_.cols - i));
      std::swap(f[i], f[j]);
    }
    f.resize(n_features_);
    std::sort(f.begin(), f.end());
    return f;
  }

  int grow(std::vector<std::size_t>& rows, int depth) {
    double sw = 0.0;
    double sy = 0.0;
    double syy = 0.0;
    for (std::size_t r : rows) {
      sw += w_[r];
      sy += w_[r] * y_[r];
      syy += w_[r] * y_[r] * y_[r];
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_.back().value = sy / sw;

    const double sse = syy - sy * sy / sw;
    const auto min_leaf = static_cast<std::size_t>(std::max(p_.min_samples_leaf, 1));
    if (depth >= p_.max_depth || rows.size() < 2 * min_leaf || sse <= 1e-12 * std::max(syy, 1e-300)) return id;

    const Split best = find_split(rows, sw, sy, sse, min_leaf);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) (x_.at(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left, depth + 1);
    const int rr = grow(right, depth + 1);
    TreeNode& n = nodes_[static_cast<std::size_t>(id)];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.left = l;
    n.right = rr;
    return id;
  }

  Split find_split(const std::vector<std::size_t>& rows, double sw, double sy, double sse, std::size_t min_leaf) {
    const double parent = sy * sy / sw;
    // A split must remove a meaningful share of the node's squared error;
    // this also keeps ties decided by scan order rather than rounding.
    const double min_gain = 1e-12 * std::max(sse, 1e-300);
    Split best;
    double best_gain = min_gain;
    std::vector<std::size_t> order(rows);
    for (std::size_t f : candidate_features()) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return x_.at(a, f) < x_.at(b, f); });
      double lw = 0.0;
      double ly = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const std::size_t r = order[k];
        lw += w_[r];
        ly += w_[r] * y_[r];
        const double a = x_.at(r, f);
        const double b = x_.at(order[k + 1], f);
        if (!(a < b)) continue;
        if (k + 1 < min_leaf || order.size() - (k + 1) < min_leaf) continue;
        const double rw = sw - lw;
        if (lw <= 0.0 || rw <= 0.0) continue;
        const double ry = sy - ly;
        const double gain = ly * ly / lw + ry * ry / rw - parent;
        if (gain > best_gain) {
          best_gain = gain;
          double t = a + (b - a) * 0.5;
          if (!(t < b)) t = a;
          best = {static_cast<int>(f), t, gain};
        }
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  const std::vector<double>& y_;
  const std::vector<double>& w_;
  TreeParams p_;
  Rng rng_;
  std::size_t n_features_ = 1;
  std::vector<TreeNode> nodes_;
};

void check_training_set(const FeatureMatrix& x, const std::vector<double>& y) {
  if (x.rows == 0 || y.empty()) throw EmptyTrainingSet("training set is empty");
  if (y.size() != x.rows) throw InvalidArgument("target count does not match the feature rows");
}

}  // namespace

RegressionTree fit_tree(const FeatureMatrix& x, const std::vector<double>& y, const std::vector<double>& weights,
                        const TreeParams& params, std::uint64_t seed) {
  check_training_set(x, y);
  if (params.max_depth < 0) throw InvalidArgument("max_depth must be non-negative");
  if (!(params.feature_fraction > 0.0 && params.feature_fraction <= 1.0))
    throw InvalidArgument("feature_fraction must lie in (0, 1]");
  std::vector<double> w = weights.empty() ? std::vector<double>(x.rows, 1.0) : weights;
  if (w.size() != x.rows) throw InvalidArgument("weight count does not match the feature rows");
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < x.rows; ++r) {
    if (w[r] < 0.0) throw InvalidArgument("sample weights must be non-negative");
    if (w[r] > 0.0) rows.push_back(r);
  }
  if (rows.empty()) throw EmptyTrainingSet("all sample weights are zero");
  return RegressionTree(TreeBuilder(x, y, w, params, seed).build(std::move(rows)));
}

double RandomForest::predict(const double* x) const {
  if (trees.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(x);
  return s / static_cast<double>(trees.size());
}

RandomForest fit_forest(const FeatureMatrix& x, const std::vector<double>& y, const ForestParams& params,
                        std::uint64_t seed, unsigned threads) {
  check_training_set(x, y);
  if (params.n_trees < 1) throw InvalidArgument("a forest needs at least one tree");
  const TreeParams tp{params.max_depth, params.min_samples_leaf, params.feature_fraction};
  RandomForest forest;
  forest.trees.resize(static_cast<std::size_t>(params.n_trees));
  parallel_for(forest.trees.size(), threads, [&](std::size_t t) {
    const std::uint64_t tree_seed = stable_hash({seed, t});
    std::vector<double> w(x.rows, 1.0);
    if (params.bootstrap) {
      // Bootstrap resample expressed as per-row draw counts.
      std::fill(w.begin(), w.end(), 0.0);
      Rng rng(tree_seed);
      for (std::size_t i = 0; i < x.rows; ++i) w[rng.uniform_index(x.rows)] += 1.0;
    }
    forest.trees[t] = fit_tree(x, y, w, tp, mix64(tree_seed));
  });
  return forest;
}

std::string_view to_string(BoostLoss loss) {
  switch (loss) {
    case BoostLoss::Linear: return "linear";
    case BoostLoss::Square: return "square";
    case BoostLoss::Exponential: return "exponential";
  }
  return "linear";
}

BoostLoss parse_boost_loss(std::string_view text) {
  if (text == "linear") return BoostLoss::Linear;
  if (text == "square") return BoostLoss::Square;
  if (text == "exponential") return BoostLoss::Exponential;
  throw InvalidArgument("unknown boosting loss '" + std::string(text) + "'");
}

double weighted_median(std::vector<double> values, std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size()) throw InvalidArgument("weighted median needs matching inputs");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double cum = 0.0;
  for (std::size_t i : order) {
    cum += weights[i];
    if (cum >= 0.5 * total) return values[i];
  }
  return values[order.back()];
}

double AdaBoostR2::predict(const double* x) const {
  if (stages.empty()) return 0.0;
  std::vector<double> preds;
  preds.reserve(stages.size());
  for (const auto& s : stages) preds.push_back(s.predict(x));
  return weighted_median(std::move(preds), stage_weights);
}

AdaBoostR2 fit_adaboost(const FeatureMatrix& x, const std::vector<double>& y, const BoostParams& params,
                        std::uint64_t seed) {
  check_training_set(x, y);
  if (params.n_stages < 1) throw InvalidArgument("boosting needs at least one stage");
  const TreeParams tp{params.max_depth, params.min_samples_leaf, 1.0};
  const std::size_t n = x.rows;
  std::vector<double> w(n, 1.0);
  std::vector<double> loss(n);
  AdaBoostR2 model;

  for (int stage = 0; stage < params.n_stages; ++stage) {
    RegressionTree tree = fit_tree(x, y, w, tp, stable_hash({seed, static_cast<std::uint64_t>(stage)}));
    double max_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      loss[i] = std::abs(tree.predict(x.row(i)) - y[i]);
      max_err = std::max(max_err, loss[i]);
    }
    if (max_err == 0.0) {
      // A perfect stage: keep it and stop.
      model.stages.push_back(std::move(tree));
      model.stage_weights.push_back(1.0);
      break;
    }
    double mean_loss = 0.0;
    double total_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double l = loss[i] / max_err;
      if (params.loss == BoostLoss::Square) l *= l;
      if (params.loss == BoostLoss::Exponential) l = 1.0 - std::exp(-l);
      loss[i] = l;
      mean_loss += w[i] * l;
      total_w += w[i];
    }
    mean_loss /= total_w;
    if (mean_loss >= 0.5) {
      // Worse than chance: discard the stage, unless nothing has been kept.
      if (model.stages.empty()) {
        model.stages.push_back(std::move(tree));
        model.stage_weights.push_back(1.0);
      }
      break;
    }
    const double beta = mean_loss / (1.0 - mean_loss);
    model.stages.push_back(std::move(tree));
    model.stage_weights.push_back(std::log(1.0 / beta));

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::pow(beta, 1.0 - loss[i]);
      sum += w[i];
    }
    const double scale = static_cast<double>(n) / sum;
    for (double& wi : w) wi *= scale;
  }
  return model;
}

}  // namespace vortexgrip
