#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tsalign/feature_matrix.hpp"

namespace tsalign {

using Prediction = std::vector<int>;

/// Brute-force Euclidean k-NN. Ties are pinned: equal distances prefer the
/// lower training row; vote ties prefer the tied class with the smaller
/// summed neighbor distance, then the lower class index.
struct KnnModel {
  std::size_t k = 1;
  std::size_t cols = 0;
  int num_classes = 0;
  std::vector<double> train;  // row-major copy of the training matrix
  std::vector<int> labels;

  std::size_t rows() const { return cols == 0 ? 0 : train.size() / cols; }

  bool operator==(const KnnModel&) const = default;
};

KnnModel knn_fit(const FeatureMatrix& train, std::span<const int> labels, std::size_t k);
Prediction knn_predict(const KnnModel& model, const FeatureMatrix& queries);

/// One decision-tree node. Leaves keep per-class sample counts; internal
/// nodes route x[feature] <= threshold to `left`, otherwise to `right`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<std::int64_t> class_counts;  // leaves only

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  bool operator==(const DecisionTree&) const = default;
};

/// Bagged Gini-impurity trees with sqrt(d) feature subsampling; one RNG
/// stream per tree keeps the fit bit-identical for any thread count.
struct ForestModel {
  std::size_t num_trees = 0;
  std::uint64_t seed = 0;
  std::size_t cols = 0;
  int num_classes = 0;
  std::vector<DecisionTree> trees;

  bool operator==(const ForestModel&) const = default;
};

ForestModel rf_fit(const FeatureMatrix& train, std::span<const int> labels,
                   std::size_t num_trees, std::uint64_t seed);
Prediction rf_predict(const ForestModel& model, const FeatureMatrix& queries);

}  // namespace tsalign
