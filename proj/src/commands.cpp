#include "tsalign/commands.hpp"

#include <chrono>
#include <fstream>

#include "tsalign/errors.hpp"
#include "tsalign/rng.hpp"

namespace tsalign {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point from,
                  std::chrono::steady_clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

LabeledDataset resolve_dataset(const RunConfig& config) {
  if (config.dataset_path.has_value() == config.synthetic.has_value()) {
    throw Error(ErrorCode::InvalidSpec,
                "exactly one of dataset path and synthetic spec must be given");
  }
  if (config.dataset_path) return load_dataset(*config.dataset_path);
  return generate_synthetic(*config.synthetic, config.seed);
}

void ensure_out_dir(const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoFailure,
                "cannot create output directory " + out_dir.string() + ": " + ec.message());
  }
}

}  // namespace

ordered_json to_json(const RunConfig& config) {
  ordered_json doc;
  if (config.dataset_path) {
    doc["dataset"] = config.dataset_path->string();
  } else {
    doc["dataset"] = nullptr;
  }
  if (config.synthetic) {
    const SyntheticSpec& spec = *config.synthetic;
    ordered_json synth;
    synth["classes"] = spec.num_classes;
    synth["per_class"] = spec.jobs_per_class;
    synth["min_length"] = spec.min_length;
    synth["max_length"] = spec.max_length;
    synth["channels"] = spec.channels;
    synth["placement"] = spec.placement == SignaturePlacement::Delayed ? "delayed" : "uniform";
    synth["noise_std"] = spec.noise_std;
    doc["synthetic"] = std::move(synth);
  } else {
    doc["synthetic"] = nullptr;
  }
  doc["alignment"] = to_json(config.alignment);
  doc["test_fraction"] = config.test_fraction;
  doc["folds"] = config.folds;
  ordered_json grid;
  grid["pca_k"] = config.pca_grid;
  grid["knn_k"] = config.knn_grid;
  grid["rf_trees"] = config.rf_grid;
  doc["grid"] = std::move(grid);
  doc["out_dir"] = config.out_dir.string();
  doc["seed"] = config.seed;
  return doc;
}

std::vector<GridPoint> build_grid(const RunConfig& config) {
  std::vector<GridPoint> grid;
  for (std::size_t pca_k : config.pca_grid) {
    for (std::size_t k : config.knn_grid) {
      grid.push_back({pca_k, ClassifierKind::Knn, k});
    }
    for (std::size_t trees : config.rf_grid) {
      grid.push_back({pca_k, ClassifierKind::RandomForest, trees});
    }
  }
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "grid description is empty");
  return grid;
}

void cmd_generate(const SyntheticSpec& spec, std::uint64_t seed,
                  const std::filesystem::path& out_path) {
  const LabeledDataset dataset = generate_synthetic(spec, seed);
  if (out_path.has_parent_path()) ensure_out_dir(out_path.parent_path());
  save_dataset(dataset, out_path);
}

void cmd_featurize(const std::filesystem::path& dataset_path, const AlignmentConfig& config,
                   const std::filesystem::path& out_path) {
  const LabeledDataset dataset = load_dataset(dataset_path);
  const FeatureMatrix features = align_dataset(dataset, config);
  if (out_path.has_parent_path()) ensure_out_dir(out_path.parent_path());
  save_features(features, out_path);
}

GridSearchResult cmd_train(const RunConfig& config, const std::filesystem::path& features_path) {
  const FeatureMatrix features = load_features(features_path);
  GridSearchOptions options;
  options.folds = config.folds;
  options.seed = config.seed;
  options.alignment = config.alignment;
  GridSearchResult result = grid_search(features, build_grid(config), options);

  ensure_out_dir(config.out_dir);
  ordered_json run_config = to_json(config);
  run_config["features"] = features_path.string();
  ordered_json grid_doc = to_json(result);
  grid_doc["run_config"] = run_config;
  write_json_file(grid_doc, config.out_dir / "gridsearch.json");
  ordered_json pipeline_doc = to_json(result.pipeline);
  pipeline_doc["run_config"] = std::move(run_config);
  write_json_file(pipeline_doc, config.out_dir / "pipeline.json");
  return result;
}

MetricsReport cmd_evaluate(const std::filesystem::path& pipeline_path,
                           const std::filesystem::path& features_path,
                           const std::filesystem::path& out_dir) {
  const FittedPipeline pipeline = load_pipeline(pipeline_path);
  const FeatureMatrix features = load_features(features_path);

  const auto t0 = std::chrono::steady_clock::now();
  MetricsReport report = evaluate(pipeline, features);
  const auto t1 = std::chrono::steady_clock::now();
  report.timings.predict_ms = elapsed_ms(t0, t1);

  ensure_out_dir(out_dir);
  emit_report(report, out_dir / "report.json");
  return report;
}

MetricsReport cmd_run_all(const RunConfig& config) {
  const LabeledDataset dataset = resolve_dataset(config);

  StageTimings timings;
  const auto t0 = std::chrono::steady_clock::now();
  const FeatureMatrix features = align_dataset(dataset, config.alignment);
  const auto t1 = std::chrono::steady_clock::now();
  timings.featurize_ms = elapsed_ms(t0, t1);

  const SplitIndices split =
      stratified_shuffle_split(features.labels, config.test_fraction, config.seed);
  const FeatureMatrix train_features = select_rows(features, split.train);
  const FeatureMatrix test_features = select_rows(features, split.test);

  GridSearchOptions options;
  options.folds = config.folds;
  options.seed = config.seed;
  options.alignment = config.alignment;
  options.timings = &timings;
  const GridSearchResult result = grid_search(train_features, build_grid(config), options);

  const auto t2 = std::chrono::steady_clock::now();
  MetricsReport report = evaluate(result.pipeline, test_features);
  const auto t3 = std::chrono::steady_clock::now();
  timings.predict_ms = elapsed_ms(t2, t3);
  report.global_seed = config.seed;
  report.timings = timings;

  ensure_out_dir(config.out_dir);
  write_json_file(to_json(config), config.out_dir / "config.json");
  ordered_json grid_doc = to_json(result);
  grid_doc["run_config"] = to_json(config);
  write_json_file(grid_doc, config.out_dir / "gridsearch.json");
  ordered_json pipeline_doc = to_json(result.pipeline);
  pipeline_doc["run_config"] = to_json(config);
  write_json_file(pipeline_doc, config.out_dir / "pipeline.json");
  emit_report(report, config.out_dir / "report.json");
  return report;
}

std::vector<BenchRecord> cmd_bench(const std::filesystem::path& dataset_path,
                                   const std::vector<AlignmentConfig>& configs,
                                   std::size_t repetitions,
                                   const std::filesystem::path& out_dir) {
  const LabeledDataset dataset = load_dataset(dataset_path);
  const std::vector<BenchRecord> records = bench_featurize(dataset, configs, repetitions);

  ensure_out_dir(out_dir);
  emit_bench(records, out_dir / "bench.json");
  const std::string table = bench_table(records);
  std::ofstream table_file(out_dir / "bench.txt", std::ios::binary);
  if (!table_file) {
    throw Error(ErrorCode::IoFailure, "cannot open " + (out_dir / "bench.txt").string());
  }
  table_file << table;
  return records;
}

}  // namespace tsalign
