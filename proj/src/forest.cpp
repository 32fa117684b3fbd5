#include "spcv/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spcv/errors.hpp"
#include "spcv/rng.hpp"

namespace spcv {

namespace {

// Scratch state for growing one tree; reused across trees. The bootstrap
// sample is held as a per-row multiplicity over the original rows, so feature
// order is sorted once per fit and each node's split scan is a single pass
// over the distinct rows it contains.
struct TreeBuilder {
  const FeatureMatrix* X;        // original feature columns
  const std::vector<double>* y;  // original responses
  int n_features;
  int mtry;
  int min_node_size;
  Rng* rng;
  Tree* tree;

  std::vector<int> weight;              // bootstrap multiplicity by original row
  std::vector<std::vector<int>> order;  // per feature: present rows, value-sorted
  std::vector<int> feature_pool;        // for mtry draws
  std::vector<char> goes_left;          // by original row
  std::vector<int> scratch;             // partition buffer

  // segment [lo, hi) of distinct rows carrying total_weight bootstrap samples
  int build(int lo, int hi, int total_weight) {
    int node_id = static_cast<int>(tree->nodes.size());
    tree->nodes.emplace_back();

    double sum = 0.0;
    double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
    for (int p = lo; p < hi; ++p) {
      int r = order[0][p];
      double yv = (*y)[r];
      sum += weight[r] * yv;
      y_lo = std::min(y_lo, yv);
      y_hi = std::max(y_hi, yv);
    }

    int best_feature = -1;
    double best_threshold = 0.0, best_metric = 0.0;
    if (total_weight > min_node_size && y_lo < y_hi) {
      best_metric = sum * sum / total_weight;  // unsplit baseline; a split must beat it
      // draw mtry distinct features, consuming the tree stream in node order
      for (int f = 0; f < n_features; ++f) feature_pool[f] = f;
      for (int d = 0; d < mtry; ++d) {
        size_t pick = d + rng->uniform_int(n_features - d);
        std::swap(feature_pool[d], feature_pool[pick]);
        int f = feature_pool[d];

        const std::vector<int>& seg = order[f];
        const std::vector<double>& col = (*X)[f];
        double left_sum = 0.0;
        int left_w = 0;
        for (int p = lo; p + 1 < hi; ++p) {
          int r = seg[p];
          left_sum += weight[r] * (*y)[r];
          left_w += weight[r];
          double a = col[r], b = col[seg[p + 1]];
          if (a == b) continue;
          int right_w = total_weight - left_w;
          double metric =
              left_sum * left_sum / left_w + (sum - left_sum) * (sum - left_sum) / right_w;
          if (metric < best_metric) continue;
          double mid = a + (b - a) / 2.0;
          if (mid >= b) mid = a;  // keep the partition boundary between a and b
          if (metric == best_metric) {
            if (best_feature < 0) continue;  // no gain over the unsplit node
            // ties go to the lowest feature index, then the lowest threshold
            if (f > best_feature || (f == best_feature && mid >= best_threshold)) continue;
          }
          best_feature = f;
          best_threshold = mid;
          best_metric = metric;
        }
      }
    }

    if (best_feature < 0) {
      tree->nodes[node_id].value = sum / total_weight;
      return node_id;
    }

    const std::vector<double>& best_col = (*X)[best_feature];
    int left_rows = 0, left_weight = 0;
    for (int p = lo; p < hi; ++p) {
      int r = order[0][p];
      bool left = best_col[r] <= best_threshold;
      goes_left[r] = left;
      if (left) {
        ++left_rows;
        left_weight += weight[r];
      }
    }
    for (int f = 0; f < n_features; ++f) {
      std::vector<int>& seg = order[f];
      int li = 0, ri = left_rows;
      for (int p = lo; p < hi; ++p) {
        int r = seg[p];
        scratch[goes_left[r] ? li++ : ri++] = r;
      }
      std::copy(scratch.begin(), scratch.begin() + (hi - lo), seg.begin() + lo);
    }

    int mid_point = lo + left_rows;
    tree->nodes[node_id].feature = best_feature;
    tree->nodes[node_id].threshold = best_threshold;
    int left_id = build(lo, mid_point, left_weight);
    int right_id = build(mid_point, hi, total_weight - left_weight);
    tree->nodes[node_id].left = left_id;
    tree->nodes[node_id].right = right_id;
    return node_id;
  }
};

}  // namespace

RegressionForest fit_forest(const FeatureMatrix& X, const std::vector<double>& y,
                            const ForestConfig& config) {
  int n_features = static_cast<int>(X.size());
  if (n_features == 0) throw ParamError("fit_forest: no feature columns");
  int n = static_cast<int>(y.size());
  if (n == 0) throw ParamError("fit_forest: empty training set");
  for (const auto& col : X) {
    if (static_cast<int>(col.size()) != n) {
      throw std::invalid_argument("fit_forest: feature column length mismatch");
    }
  }
  if (config.mtry < 1 || config.mtry > n_features) {
    throw ParamError("fit_forest: mtry must be in [1, feature count]");
  }
  if (config.n_trees < 1 || config.min_node_size < 1) {
    throw ParamError("fit_forest: n_trees and min_node_size must be positive");
  }

  RegressionForest forest;
  forest.config = config;
  forest.n_features = n_features;
  forest.y_min = *std::min_element(y.begin(), y.end());
  forest.y_max = *std::max_element(y.begin(), y.end());
  forest.trees.resize(config.n_trees);

  // one value-sort per feature serves every tree
  std::vector<std::vector<int>> base_order(n_features, std::vector<int>(n));
  for (int f = 0; f < n_features; ++f) {
    std::vector<int>& idx = base_order[f];
    for (int i = 0; i < n; ++i) idx[i] = i;
    const std::vector<double>& col = X[f];
    std::sort(idx.begin(), idx.end(), [&col](int a, int b) { return col[a] < col[b]; });
  }

  TreeBuilder builder;
  builder.X = &X;
  builder.y = &y;
  builder.n_features = n_features;
  builder.mtry = config.mtry;
  builder.min_node_size = config.min_node_size;
  builder.weight.resize(n);
  builder.order.resize(n_features);
  builder.feature_pool.resize(n_features);
  builder.goes_left.resize(n);
  builder.scratch.resize(n);

  for (int t = 0; t < config.n_trees; ++t) {
    Rng rng(substream_seed(config.seed, static_cast<uint64_t>(t)));
    std::fill(builder.weight.begin(), builder.weight.end(), 0);
    for (int i = 0; i < n; ++i) ++builder.weight[rng.uniform_int(n)];
    for (int f = 0; f < n_features; ++f) {
      std::vector<int>& seg = builder.order[f];
      seg.clear();
      for (int r : base_order[f]) {
        if (builder.weight[r] > 0) seg.push_back(r);
      }
    }
    builder.rng = &rng;
    builder.tree = &forest.trees[t];
    forest.trees[t].nodes.clear();
    forest.trees[t].nodes.reserve(2 * n / std::max(1, config.min_node_size) + 4);
    builder.build(0, static_cast<int>(builder.order[0].size()), n);
  }
  return forest;
}

double predict_row(const RegressionForest& forest, const std::vector<double>& row) {
  if (static_cast<int>(row.size()) != forest.n_features) {
    throw std::invalid_argument("predict: feature count mismatch");
  }
  double total = 0.0;
  for (const Tree& tree : forest.trees) {
    int node = 0;
    while (tree.nodes[node].feature >= 0) {
      const TreeNode& nd = tree.nodes[node];
      node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    total += tree.nodes[node].value;
  }
  double mean = total / forest.trees.size();
  return std::clamp(mean, forest.y_min, forest.y_max);
}

std::vector<double> predict(const RegressionForest& forest, const FeatureMatrix& X) {
  if (static_cast<int>(X.size()) != forest.n_features) {
    throw std::invalid_argument("predict: feature count mismatch");
  }
  size_t n_rows = X.empty() ? 0 : X[0].size();
  for (const auto& col : X) {
    if (col.size() != n_rows) throw std::invalid_argument("predict: ragged feature matrix");
  }

  std::vector<double> out(n_rows, 0.0);
  for (const Tree& tree : forest.trees) {
    for (size_t i = 0; i < n_rows; ++i) {
      int node = 0;
      while (tree.nodes[node].feature >= 0) {
        const TreeNode& nd = tree.nodes[node];
        node = X[nd.feature][i] <= nd.threshold ? nd.left : nd.right;
      }
      out[i] += tree.nodes[node].value;
    }
  }
  double lo = forest.y_min, hi = forest.y_max;
  for (double& v : out) v = std::clamp(v / forest.trees.size(), lo, hi);
  return out;
}

}  // namespace spcv
