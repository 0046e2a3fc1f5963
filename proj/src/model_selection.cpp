#include "tsalign/model_selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "tsalign/errors.hpp"
#include "tsalign/rng.hpp"

namespace tsalign {

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(std::span<const int> labels) {
  int num_classes = 0;
  for (int label : labels) {
    if (label < 0) throw Error(ErrorCode::UnknownLabel, "negative label");
    num_classes = std::max(num_classes, label + 1);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    by_class[static_cast<std::size_t>(labels[r])].push_back(r);
  }
  return by_class;
}

ClassifierModel fit_classifier(const GridPoint& point, const FeatureMatrix& features,
                               std::uint64_t forest_seed) {
  if (point.classifier == ClassifierKind::Knn) {
    return knn_fit(features, features.labels, point.param);
  }
  return rf_fit(features, features.labels, point.param, forest_seed);
}

Prediction predict_classifier(const ClassifierModel& model, const FeatureMatrix& features) {
  if (const auto* knn = std::get_if<KnnModel>(&model)) {
    return knn_predict(*knn, features);
  }
  return rf_predict(std::get<ForestModel>(model), features);
}

double accuracy_of(const Prediction& predictions, std::span<const int> truth) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == truth[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

}  // namespace

const char* to_string(ClassifierKind kind) {
  return kind == ClassifierKind::Knn ? "knn" : "rf";
}

SplitIndices stratified_shuffle_split(std::span<const int> labels, double test_fraction,
                                      std::uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "test fraction must be in (0, 1)");
  }
  auto by_class = rows_by_class(labels);
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    if (by_class[k].size() < 2) {
      throw Error(ErrorCode::ClassTooSmall,
                  "class " + std::to_string(k) + " has " +
                      std::to_string(by_class[k].size()) + " members, need >= 2");
    }
  }

  // Largest-remainder apportionment of the total test count across classes.
  const auto total_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(labels.size())));
  std::vector<std::size_t> test_counts(by_class.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;  // (-remainder, class)
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    const double quota = test_fraction * static_cast<double>(by_class[k].size());
    test_counts[k] = static_cast<std::size_t>(std::floor(quota));
    assigned += test_counts[k];
    remainders.emplace_back(-(quota - std::floor(quota)), k);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; assigned < total_test && i < remainders.size(); ++i) {
    ++test_counts[remainders[i].second];
    ++assigned;
  }

  SplitIndices split;
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    auto& rows = by_class[k];
    rng::Stream stream(rng::derive(seed, "stratified-split", k));
    rng::shuffle(rows, stream);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      (i < test_counts[k] ? split.test : split.train).push_back(rows[i]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<SplitIndices> stratified_k_fold(std::span<const int> labels, std::size_t k,
                                            std::uint64_t seed) {
  if (k < 2) {
    throw Error(ErrorCode::InvalidSpec, "need at least 2 folds");
  }
  auto by_class = rows_by_class(labels);
  for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
    if (by_class[cls].size() < k) {
      throw Error(ErrorCode::ClassTooSmall,
                  "class " + std::to_string(cls) + " has " +
                      std::to_string(by_class[cls].size()) + " members, need >= " +
                      std::to_string(k));
    }
  }

  std::vector<std::vector<std::size_t>> fold_test(k);
  for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
    auto& rows = by_class[cls];
    rng::Stream stream(rng::derive(seed, "stratified-fold", cls));
    rng::shuffle(rows, stream);
    const std::size_t base = rows.size() / k;
    const std::size_t extra = rows.size() % k;
    std::size_t cursor = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t count = base + (f < extra ? 1 : 0);
      for (std::size_t i = 0; i < count; ++i) fold_test[f].push_back(rows[cursor++]);
    }
  }

  std::vector<SplitIndices> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(fold_test[f].begin(), fold_test[f].end());
    folds[f].test = fold_test[f];
    for (std::size_t r = 0; r < labels.size(); ++r) {
      if (!std::binary_search(fold_test[f].begin(), fold_test[f].end(), r)) {
        folds[f].train.push_back(r);
      }
    }
  }
  return folds;
}

FoldFit fit_fold_transforms(const FeatureMatrix& features,
                            std::span<const std::size_t> train_rows, std::size_t pca_k) {
  const FeatureMatrix fold_train = select_rows(features, train_rows);
  FoldFit fit;
  fit.scaler = fit_minmax(fold_train);
  fit.pca = fit_pca(transform_minmax(fit.scaler, fold_train), pca_k);
  return fit;
}

GridSearchResult grid_search(const FeatureMatrix& train_features,
                             const std::vector<GridPoint>& grid,
                             const GridSearchOptions& options) {
  if (train_features.rows == 0) {
    throw Error(ErrorCode::EmptyMatrix, "no training rows");
  }
  const auto folds =
      stratified_k_fold(train_features.labels, options.folds,
                        rng::derive(options.seed, "cv-folds", 0));

  // A point is feasible when its PCA dimension fits every fold's training
  // shape (and the final full-data refit, which is never the binding bound).
  std::size_t min_fold_train_rows = train_features.rows;
  for (const auto& fold : folds) {
    min_fold_train_rows = std::min(min_fold_train_rows, fold.train.size());
  }
  const std::size_t pca_bound = std::min(min_fold_train_rows - 1, train_features.cols);

  GridSearchResult result;
  result.seed = options.seed;
  result.folds = options.folds;
  for (const auto& point : grid) {
    if (point.pca_k >= 1 && point.pca_k <= pca_bound) {
      result.table.push_back({point, {}, 0.0});
    } else {
      result.infeasible.push_back(point);
    }
  }
  if (result.table.empty()) {
    throw Error(ErrorCode::EmptyGrid, "no feasible grid points");
  }

  for (std::size_t g = 0; g < result.table.size(); ++g) {
    GridCell& cell = result.table[g];
    cell.fold_accuracies.resize(folds.size(), 0.0);
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto& fold = folds[f];
      const FoldFit fit = fit_fold_transforms(train_features, fold.train, cell.point.pca_k);
      const FeatureMatrix fold_train = select_rows(train_features, fold.train);
      const FeatureMatrix fold_test = select_rows(train_features, fold.test);
      const FeatureMatrix train_proj =
          project(fit.pca, transform_minmax(fit.scaler, fold_train));
      const FeatureMatrix test_proj =
          project(fit.pca, transform_minmax(fit.scaler, fold_test));

      const auto model = fit_classifier(
          cell.point, train_proj, rng::derive(options.seed, "cv-forest", g * folds.size() + f));
      cell.fold_accuracies[f] = accuracy_of(predict_classifier(model, test_proj),
                                            fold_test.labels);
    }
    cell.mean_accuracy =
        std::accumulate(cell.fold_accuracies.begin(), cell.fold_accuracies.end(), 0.0) /
        static_cast<double>(cell.fold_accuracies.size());
  }

  result.best_index = 0;
  for (std::size_t g = 1; g < result.table.size(); ++g) {
    if (result.table[g].mean_accuracy > result.table[result.best_index].mean_accuracy) {
      result.best_index = g;
    }
  }

  const GridPoint best = result.table[result.best_index].point;
  FittedPipeline pipeline;
  pipeline.alignment = options.alignment;
  pipeline.point = best;

  const auto now = [] { return std::chrono::steady_clock::now(); };
  const auto ms = [](auto from, auto to) {
    return std::chrono::duration<double, std::milli>(to - from).count();
  };

  auto t0 = now();
  pipeline.scaler = fit_minmax(train_features);
  const FeatureMatrix scaled = transform_minmax(pipeline.scaler, train_features);
  auto t1 = now();
  pipeline.pca = fit_pca(scaled, best.pca_k);
  const FeatureMatrix projected = project(pipeline.pca, scaled);
  auto t2 = now();
  pipeline.classifier =
      fit_classifier(best, projected, rng::derive(options.seed, "refit-forest", 0));
  auto t3 = now();
  if (options.timings != nullptr) {
    options.timings->scale_ms = ms(t0, t1);
    options.timings->pca_ms = ms(t1, t2);
    options.timings->fit_ms = ms(t2, t3);
  }
  result.pipeline = std::move(pipeline);
  return result;
}

Prediction predict(const FittedPipeline& pipeline, const FeatureMatrix& raw_features) {
  const FeatureMatrix projected =
      project(pipeline.pca, transform_minmax(pipeline.scaler, raw_features));
  return predict_classifier(pipeline.classifier, projected);
}

MetricsReport evaluate(const FittedPipeline& pipeline, const FeatureMatrix& test_features) {
  const Prediction predictions = predict(pipeline, test_features);

  int num_classes = std::visit([](const auto& m) { return m.num_classes; },
                               pipeline.classifier);
  for (int label : test_features.labels) num_classes = std::max(num_classes, label + 1);
  const auto size = static_cast<std::size_t>(num_classes);

  MetricsReport report;
  report.confusion.assign(size, std::vector<std::int64_t>(size, 0));
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    ++report.confusion[static_cast<std::size_t>(test_features.labels[i])]
                      [static_cast<std::size_t>(predictions[i])];
  }

  std::int64_t trace = 0;
  for (std::size_t c = 0; c < size; ++c) trace += report.confusion[c][c];
  report.accuracy = static_cast<double>(trace) / static_cast<double>(predictions.size());

  report.precision.assign(size, 0.0);
  report.recall.assign(size, 0.0);
  report.precision_defined.assign(size, false);
  report.recall_defined.assign(size, false);
  for (std::size_t c = 0; c < size; ++c) {
    std::int64_t col_sum = 0;
    std::int64_t row_sum = 0;
    for (std::size_t r = 0; r < size; ++r) {
      col_sum += report.confusion[r][c];
      row_sum += report.confusion[c][r];
    }
    if (col_sum > 0) {
      report.precision[c] = static_cast<double>(report.confusion[c][c]) /
                            static_cast<double>(col_sum);
      report.precision_defined[c] = true;
    }
    if (row_sum > 0) {
      report.recall[c] = static_cast<double>(report.confusion[c][c]) /
                         static_cast<double>(row_sum);
      report.recall_defined[c] = true;
    }
  }

  report.alignment_method = to_string(pipeline.alignment.method);
  report.n = pipeline.alignment.n;
  report.alignment_seed = pipeline.alignment.seed;
  report.point = pipeline.point;
  return report;
}

}  // namespace tsalign
