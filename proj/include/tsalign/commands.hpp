#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "tsalign/alignment.hpp"
#include "tsalign/dataset.hpp"
#include "tsalign/metrics.hpp"
#include "tsalign/model_selection.hpp"
#include "tsalign/serialization.hpp"

namespace tsalign {

/// Everything one experiment depends on. Exactly one of dataset_path and
/// synthetic must be set; the config is embedded in every JSON artifact so a
/// run can be reproduced from its outputs alone.
struct RunConfig {
  std::optional<std::filesystem::path> dataset_path;
  std::optional<SyntheticSpec> synthetic;
  AlignmentConfig alignment;
  double test_fraction = 0.2;
  std::size_t folds = 5;
  std::vector<std::size_t> pca_grid = {16, 32};
  std::vector<std::size_t> knn_grid = {7, 9};
  std::vector<std::size_t> rf_grid = {100, 200};
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
};

ordered_json to_json(const RunConfig& config);

/// Grid enumeration order (the cross-validation tie-break order): for each
/// pca_k, every KNN point, then every forest point.
std::vector<GridPoint> build_grid(const RunConfig& config);

void cmd_generate(const SyntheticSpec& spec, std::uint64_t seed,
                  const std::filesystem::path& out_path);

void cmd_featurize(const std::filesystem::path& dataset_path, const AlignmentConfig& config,
                   const std::filesystem::path& out_path);

/// Grid search over an existing features CSV; writes gridsearch.json and
/// pipeline.json under config.out_dir.
GridSearchResult cmd_train(const RunConfig& config, const std::filesystem::path& features_path);

/// Evaluates a saved pipeline against a features CSV; writes report.json
/// (plus confusion and timings companions) under out_dir.
MetricsReport cmd_evaluate(const std::filesystem::path& pipeline_path,
                           const std::filesystem::path& features_path,
                           const std::filesystem::path& out_dir);

/// Dataset (loaded or synthesized) -> features -> stratified split -> grid
/// search -> refit -> test evaluation. Writes config.json, gridsearch.json,
/// pipeline.json, and report.json with companions under config.out_dir.
MetricsReport cmd_run_all(const RunConfig& config);

/// Benchmarks every config against the dataset; writes bench.json and
/// bench.txt under out_dir and returns the records.
std::vector<BenchRecord> cmd_bench(const std::filesystem::path& dataset_path,
                                   const std::vector<AlignmentConfig>& configs,
                                   std::size_t repetitions,
                                   const std::filesystem::path& out_dir);

}  // namespace tsalign
