#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spcv {

// Feature matrix stored column-major: columns[f][i] is feature f of row i.
using FeatureMatrix = std::vector<std::vector<double>>;

struct ForestConfig {
  int n_trees = 500;
  int min_node_size = 5;
  int mtry = 2;
  std::vector<std::string> features = {"X2", "X3", "X6", "X7", "X8", "X9", "X10"};
  uint64_t seed = 0;
};

// Internal nodes test x[feature] <= threshold (left on true); leaves carry the
// mean response of their bootstrap samples and have feature = -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;
};

struct RegressionForest {
  std::vector<Tree> trees;
  ForestConfig config;
  int n_features = 0;
  double y_min = 0.0;
  double y_max = 0.0;
};

// Seeded CART ensemble: per-tree bootstrap of size n, mtry features without
// replacement per node, best split by variance reduction, midpoint
// thresholds. A node splits while it holds more than min_node_size samples
// and some candidate split has positive gain. Deterministic for fixed inputs.
RegressionForest fit_forest(const FeatureMatrix& X, const std::vector<double>& y,
                            const ForestConfig& config);

// Mean across trees, clamped into the training response range.
std::vector<double> predict(const RegressionForest& forest, const FeatureMatrix& X);

double predict_row(const RegressionForest& forest, const std::vector<double>& row);

}  // namespace spcv
