#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsalign/alignment.hpp"
#include "tsalign/classifiers.hpp"
#include "tsalign/feature_matrix.hpp"
#include "tsalign/pca.hpp"
#include "tsalign/scaling.hpp"

namespace tsalign {

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

enum class ClassifierKind { Knn, RandomForest };

const char* to_string(ClassifierKind kind);

/// One grid-search candidate: a PCA dimension and a classifier with its
/// hyperparameter (neighbor count for k-NN, tree count for random forest).
struct GridPoint {
  std::size_t pca_k = 0;
  ClassifierKind classifier = ClassifierKind::Knn;
  std::size_t param = 0;

  bool operator==(const GridPoint&) const = default;
};

/// Seeded per-class shuffle; per-class test counts come from
/// largest-remainder apportionment of the overall test fraction.
SplitIndices stratified_shuffle_split(std::span<const int> labels, double test_fraction,
                                      std::uint64_t seed);

/// Every row lands in exactly one test fold; per-fold class counts deviate
/// from proportional by at most one.
std::vector<SplitIndices> stratified_k_fold(std::span<const int> labels, std::size_t k,
                                            std::uint64_t seed);

using ClassifierModel = std::variant<KnnModel, ForestModel>;

struct FittedPipeline {
  AlignmentConfig alignment;
  GridPoint point;
  ScalerModel scaler;
  PcaModel pca;
  ClassifierModel classifier;
};

struct GridCell {
  GridPoint point;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
};

struct GridSearchResult {
  std::vector<GridCell> table;          // feasible points, grid order
  std::vector<GridPoint> infeasible;    // filtered, never evaluated
  std::size_t best_index = 0;           // into table
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  FittedPipeline pipeline;              // best point refit on all rows
};

struct StageTimings;

struct GridSearchOptions {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  AlignmentConfig alignment;  // provenance echo for the refit pipeline
  StageTimings* timings = nullptr;  // when set, receives the refit stage times
};

/// Scaler and PCA fitted on one fold's training rows only; the white-box
/// handle for verifying that held-out rows never leak into fitting.
struct FoldFit {
  ScalerModel scaler;
  PcaModel pca;
};

FoldFit fit_fold_transforms(const FeatureMatrix& features,
                            std::span<const std::size_t> train_rows, std::size_t pca_k);

/// Cross-validated accuracy for every feasible grid point, then a refit of
/// the winner (ties resolve to the earliest grid entry) on all rows.
GridSearchResult grid_search(const FeatureMatrix& train_features,
                             const std::vector<GridPoint>& grid,
                             const GridSearchOptions& options);

struct StageTimings {
  double featurize_ms = 0.0;
  double scale_ms = 0.0;
  double pca_ms = 0.0;
  double fit_ms = 0.0;
  double predict_ms = 0.0;

  bool operator==(const StageTimings&) const = default;
};

/// Everything a finished experiment reports. Timings are measured wall-clock
/// and excluded from determinism guarantees; all other fields are pure
/// functions of the run configuration.
struct MetricsReport {
  double accuracy = 0.0;
  std::vector<std::vector<std::int64_t>> confusion;  // rows true, cols predicted
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<bool> precision_defined;
  std::vector<bool> recall_defined;

  std::string alignment_method;
  std::size_t n = 0;
  std::uint64_t alignment_seed = 0;
  std::uint64_t global_seed = 0;
  GridPoint point;

  StageTimings timings;

  bool operator==(const MetricsReport&) const = default;
};

MetricsReport evaluate(const FittedPipeline& pipeline, const FeatureMatrix& test_features);

Prediction predict(const FittedPipeline& pipeline, const FeatureMatrix& raw_features);

}  // namespace tsalign
