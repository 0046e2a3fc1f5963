#include "tsalign/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsalign/errors.hpp"
#include "tsalign/rng.hpp"

namespace tsalign {

namespace {

int max_label(std::span<const int> labels) {
  int hi = 0;
  for (int label : labels) {
    if (label < 0) {
      throw Error(ErrorCode::DegenerateInput, "negative class label");
    }
    hi = std::max(hi, label);
  }
  return hi;
}

}  // namespace

KnnModel knn_fit(const FeatureMatrix& train, std::span<const int> labels, std::size_t k) {
  if (train.rows == 0 || labels.size() != train.rows) {
    throw Error(ErrorCode::DegenerateInput, "training matrix and labels disagree");
  }
  if (k < 1 || k > train.rows) {
    throw Error(ErrorCode::KTooLarge,
                "k=" + std::to_string(k) + " with " + std::to_string(train.rows) +
                    " training rows");
  }
  KnnModel model;
  model.k = k;
  model.cols = train.cols;
  model.num_classes = max_label(labels) + 1;
  model.train = train.data;
  model.labels.assign(labels.begin(), labels.end());
  return model;
}

Prediction knn_predict(const KnnModel& model, const FeatureMatrix& queries) {
  if (queries.cols != model.cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "query has " + std::to_string(queries.cols) + " columns, model expects " +
                    std::to_string(model.cols));
  }
  const std::size_t train_rows = model.rows();
  Prediction predictions(queries.rows, 0);

#pragma omp parallel for schedule(static)
  for (long long qi = 0; qi < static_cast<long long>(queries.rows); ++qi) {
    const auto q = static_cast<std::size_t>(qi);
    const auto query = queries.row(q);

    // (squared distance, train row); sorting this pair encodes the
    // distance-then-row tie rule.
    std::vector<std::pair<double, std::size_t>> ranked(train_rows);
    for (std::size_t r = 0; r < train_rows; ++r) {
      double sq = 0.0;
      const double* train_row = model.train.data() + r * model.cols;
      for (std::size_t c = 0; c < model.cols; ++c) {
        const double d = query[c] - train_row[c];
        sq += d * d;
      }
      ranked[r] = {sq, r};
    }
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(model.k),
                      ranked.end());

    std::vector<std::size_t> votes(static_cast<std::size_t>(model.num_classes), 0);
    std::vector<double> summed(static_cast<std::size_t>(model.num_classes), 0.0);
    for (std::size_t i = 0; i < model.k; ++i) {
      const auto cls = static_cast<std::size_t>(model.labels[ranked[i].second]);
      ++votes[cls];
      summed[cls] += std::sqrt(ranked[i].first);
    }
    int best = 0;
    for (int cls = 1; cls < model.num_classes; ++cls) {
      const auto c = static_cast<std::size_t>(cls);
      const auto b = static_cast<std::size_t>(best);
      if (votes[c] > votes[b] ||
          (votes[c] == votes[b] && votes[c] > 0 && summed[c] < summed[b])) {
        best = cls;
      }
    }
    predictions[q] = best;
  }
  return predictions;
}

namespace {

double gini(const std::vector<std::int64_t>& counts, std::int64_t total) {
  double impurity = 1.0;
  for (std::int64_t count : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(total);
    impurity -= p * p;
  }
  return impurity;
}

struct TreeBuilder {
  const FeatureMatrix& data;
  std::span<const int> labels;
  int num_classes;
  std::size_t features_per_split;
  rng::Stream& stream;
  DecisionTree tree;

  std::vector<std::int64_t> count_classes(std::span<const std::size_t> rows) const {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(labels[r])];
    return counts;
  }

  std::int32_t make_leaf(const std::vector<std::int64_t>& counts) {
    TreeNode node;
    node.class_counts = counts;
    tree.nodes.push_back(std::move(node));
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  }

  // Depth-first, left child before right, so node ids and RNG consumption
  // are a pure function of (data, seed).
  std::int32_t build(std::vector<std::size_t>& rows) {
    const auto counts = count_classes(rows);
    const auto total = static_cast<std::int64_t>(rows.size());
    const double parent_impurity = gini(counts, total);
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; }) <= 1;
    if (pure || rows.size() < 2) return make_leaf(counts);

    // Draw candidate features without replacement, in draw order.
    std::vector<std::size_t> candidates(data.cols);
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
    for (std::size_t i = 0; i < features_per_split; ++i) {
      const std::size_t j = i + stream.next_below(data.cols - i);
      std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(features_per_split);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = parent_impurity;

    std::vector<double> values;
    std::vector<std::pair<double, int>> sorted;  // (value, label)
    for (std::size_t feature : candidates) {
      sorted.clear();
      for (std::size_t r : rows) {
        sorted.emplace_back(data.at(r, feature), labels[r]);
      }
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::vector<std::int64_t> left_counts(static_cast<std::size_t>(num_classes), 0);
      std::vector<std::int64_t> right_counts = counts;
      std::int64_t left_total = 0;

      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const auto cls = static_cast<std::size_t>(sorted[i].second);
        ++left_counts[cls];
        --right_counts[cls];
        ++left_total;
        if (sorted[i].first == sorted[i + 1].first) continue;

        double threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2.0;
        // Midpoint can round up to the right value; fall back to the left
        // value so x <= threshold still separates the pair.
        if (threshold >= sorted[i + 1].first) threshold = sorted[i].first;

        const std::int64_t right_total = total - left_total;
        const double weighted =
            (static_cast<double>(left_total) * gini(left_counts, left_total) +
             static_cast<double>(right_total) * gini(right_counts, right_total)) /
            static_cast<double>(total);
        if (weighted < best_impurity) {
          best_impurity = weighted;
          best_feature = static_cast<int>(feature);
          best_threshold = threshold;
        }
      }
    }

    if (best_feature < 0) return make_leaf(counts);

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      if (data.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    TreeNode node;
    node.feature = best_feature;
    node.threshold = best_threshold;
    tree.nodes.push_back(std::move(node));
    const auto id = static_cast<std::int32_t>(tree.nodes.size() - 1);
    const std::int32_t left_id = build(left_rows);
    const std::int32_t right_id = build(right_rows);
    tree.nodes[static_cast<std::size_t>(id)].left = left_id;
    tree.nodes[static_cast<std::size_t>(id)].right = right_id;
    return id;
  }
};

int tree_vote(const DecisionTree& tree, std::span<const double> row) {
  std::size_t index = 0;
  for (;;) {
    const TreeNode& node = tree.nodes[index];
    if (node.is_leaf()) {
      int best = 0;
      for (int cls = 1; cls < static_cast<int>(node.class_counts.size()); ++cls) {
        if (node.class_counts[static_cast<std::size_t>(cls)] >
            node.class_counts[static_cast<std::size_t>(best)]) {
          best = cls;
        }
      }
      return best;
    }
    index = static_cast<std::size_t>(
        row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                      : node.right);
  }
}

}  // namespace

ForestModel rf_fit(const FeatureMatrix& train, std::span<const int> labels,
                   std::size_t num_trees, std::uint64_t seed) {
  if (train.rows < 2 || labels.size() != train.rows) {
    throw Error(ErrorCode::DegenerateInput, "need at least 2 training rows");
  }
  const int num_classes = max_label(labels) + 1;
  if (std::count(labels.begin(), labels.end(), labels[0]) ==
      static_cast<std::ptrdiff_t>(labels.size())) {
    throw Error(ErrorCode::DegenerateInput, "need at least 2 classes present");
  }
  if (num_trees < 1) {
    throw Error(ErrorCode::DegenerateInput, "need at least one tree");
  }

  ForestModel model;
  model.num_trees = num_trees;
  model.seed = seed;
  model.cols = train.cols;
  model.num_classes = num_classes;
  model.trees.resize(num_trees);

  const auto features_per_split = static_cast<std::size_t>(
      std::max(1.0, std::floor(std::sqrt(static_cast<double>(train.cols)))));

#pragma omp parallel for schedule(dynamic)
  for (long long t = 0; t < static_cast<long long>(num_trees); ++t) {
    rng::Stream stream(rng::derive(seed, "forest-tree", static_cast<std::uint64_t>(t)));
    std::vector<std::size_t> bootstrap(train.rows);
    for (std::size_t i = 0; i < train.rows; ++i) {
      bootstrap[i] = stream.next_below(train.rows);
    }
    TreeBuilder builder{train, labels, num_classes, features_per_split, stream, {}};
    builder.build(bootstrap);
    model.trees[static_cast<std::size_t>(t)] = std::move(builder.tree);
  }
  return model;
}

Prediction rf_predict(const ForestModel& model, const FeatureMatrix& queries) {
  if (queries.cols != model.cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "query has " + std::to_string(queries.cols) + " columns, model expects " +
                    std::to_string(model.cols));
  }
  Prediction predictions(queries.rows, 0);
#pragma omp parallel for schedule(static)
  for (long long qi = 0; qi < static_cast<long long>(queries.rows); ++qi) {
    const auto q = static_cast<std::size_t>(qi);
    std::vector<std::size_t> votes(static_cast<std::size_t>(model.num_classes), 0);
    for (const auto& tree : model.trees) {
      ++votes[static_cast<std::size_t>(tree_vote(tree, queries.row(q)))];
    }
    std::size_t best = 0;
    for (std::size_t cls = 1; cls < votes.size(); ++cls) {
      if (votes[cls] > votes[best]) best = cls;
    }
    predictions[q] = static_cast<int>(best);
  }
  return predictions;
}

}  // namespace tsalign
