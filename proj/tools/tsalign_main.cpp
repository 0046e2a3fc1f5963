#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "tsalign/commands.hpp"
#include "tsalign/errors.hpp"
#include "tsalign/io_util.hpp"

namespace {

struct LenRange {
  std::size_t min_length = 200;
  std::size_t max_length = 5000;
};

// Parses the --len argument, "MIN:MAX" or a single "LEN".
LenRange parse_len(const std::string& text) {
  const auto colon = text.find(':');
  try {
    LenRange range;
    if (colon == std::string::npos) {
      range.min_length = range.max_length = std::stoull(text);
    } else {
      range.min_length = std::stoull(text.substr(0, colon));
      range.max_length = std::stoull(text.substr(colon + 1));
    }
    return range;
  } catch (const std::exception&) {
    throw tsalign::Error(tsalign::ErrorCode::InvalidSpec,
                         "--len expects LENGTH or MIN:MAX, got '" + text + "'");
  }
}

tsalign::SignaturePlacement parse_placement(const std::string& name) {
  if (name == "uniform") return tsalign::SignaturePlacement::Uniform;
  if (name == "delayed") return tsalign::SignaturePlacement::Delayed;
  throw tsalign::Error(tsalign::ErrorCode::InvalidSpec,
                       "unknown placement '" + name + "' (valid: uniform, delayed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-dimension features from variable-length multi-channel time series"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "Cap worker threads (default: all cores)");

  std::uint64_t seed = 0;
  std::string method_name = "window-mean";
  std::size_t n = 100;
  std::string out = "out";

  std::size_t classes = 5;
  std::size_t per_class = 40;
  std::string len_text = "200:5000";
  std::size_t channels = 7;
  std::string placement = "uniform";
  double noise_std = 0.1;

  std::string data_path;
  std::string features_path;
  std::string pipeline_path;
  double test_fraction = 0.2;
  std::size_t folds = 5;
  std::vector<std::size_t> pca_grid = {16, 32};
  std::vector<std::size_t> knn_grid = {7, 9};
  std::vector<std::size_t> rf_grid = {100, 200};
  bool synthetic = false;
  std::vector<std::string> bench_methods = {"start",      "middle",     "random",
                                            "window-mean", "window-std", "fourier"};
  std::vector<std::size_t> bench_n = {100};
  std::size_t reps = 5;

  auto* generate = app.add_subcommand("generate", "Write a synthetic labelled dataset CSV");
  generate->add_option("--classes", classes, "Number of classes");
  generate->add_option("--per-class", per_class, "Jobs per class");
  generate->add_option("--len", len_text, "Job length range MIN:MAX");
  generate->add_option("--channels", channels, "Channels per job");
  generate->add_option("--placement", placement, "Signature placement: uniform | delayed");
  generate->add_option("--noise", noise_std, "Gaussian noise sigma");
  generate->add_option("--seed", seed, "Generator seed");
  generate->add_option("--out", out, "Output CSV path")->required();

  auto* featurize = app.add_subcommand("featurize", "Convert a dataset CSV to a feature CSV");
  featurize->add_option("--in", data_path, "Dataset CSV")->required();
  featurize->add_option("--method", method_name,
                        "start | middle | random | window-mean | window-std | fourier");
  featurize->add_option("--n", n, "Features per channel");
  featurize->add_option("--seed", seed, "Alignment seed (random method)");
  featurize->add_option("--out", out, "Output CSV path")->required();

  auto* train = app.add_subcommand("train", "Grid search over an existing feature CSV");
  train->add_option("--features", features_path, "Feature CSV")->required();
  train->add_option("--method", method_name, "Alignment method the features came from");
  train->add_option("--n", n, "Features per channel the features came from");
  train->add_option("--folds", folds, "Cross-validation folds");
  train->add_option("--pca-grid", pca_grid, "PCA dimensions")->delimiter(',');
  train->add_option("--knn-grid", knn_grid, "KNN neighbor counts")->delimiter(',');
  train->add_option("--rf-grid", rf_grid, "Forest tree counts")->delimiter(',');
  train->add_option("--seed", seed, "Global seed");
  train->add_option("--out", out, "Output directory");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a saved pipeline on a feature CSV");
  evaluate->add_option("--pipeline", pipeline_path, "pipeline.json from train/run-all")
      ->required();
  evaluate->add_option("--features", features_path, "Feature CSV")->required();
  evaluate->add_option("--out", out, "Output directory");

  auto* run_all = app.add_subcommand("run-all", "Dataset to report in one run");
  run_all->add_option("--data", data_path, "Dataset CSV (omit when --synthetic)");
  run_all->add_flag("--synthetic", synthetic, "Generate the dataset instead of loading one");
  run_all->add_option("--classes", classes, "Synthetic: number of classes");
  run_all->add_option("--per-class", per_class, "Synthetic: jobs per class");
  run_all->add_option("--len", len_text, "Synthetic: job length range MIN:MAX");
  run_all->add_option("--channels", channels, "Synthetic: channels per job");
  run_all->add_option("--placement", placement, "Synthetic: uniform | delayed");
  run_all->add_option("--noise", noise_std, "Synthetic: noise sigma");
  run_all->add_option("--method", method_name, "Alignment method");
  run_all->add_option("--n", n, "Features per channel");
  run_all->add_option("--test-fraction", test_fraction, "Held-out fraction");
  run_all->add_option("--folds", folds, "Cross-validation folds");
  run_all->add_option("--pca-grid", pca_grid, "PCA dimensions")->delimiter(',');
  run_all->add_option("--knn-grid", knn_grid, "KNN neighbor counts")->delimiter(',');
  run_all->add_option("--rf-grid", rf_grid, "Forest tree counts")->delimiter(',');
  run_all->add_option("--seed", seed, "Global seed");
  run_all->add_option("--out", out, "Output directory");

  auto* bench = app.add_subcommand("bench", "Time featurization methods on a dataset");
  bench->add_option("--in", data_path, "Dataset CSV")->required();
  bench->add_option("--methods", bench_methods, "Methods to time")->delimiter(',');
  bench->add_option("--n", bench_n, "Features per channel, one record per value")
      ->delimiter(',');
  bench->add_option("--reps", reps, "Repetitions per config (best is kept)");
  bench->add_option("--seed", seed, "Alignment seed (random method)");
  bench->add_option("--out", out, "Output directory");

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (generate->parsed()) {
      const LenRange len = parse_len(len_text);
      tsalign::SyntheticSpec spec;
      spec.num_classes = classes;
      spec.jobs_per_class = per_class;
      spec.min_length = len.min_length;
      spec.max_length = len.max_length;
      spec.channels = channels;
      spec.placement = parse_placement(placement);
      spec.noise_std = noise_std;
      tsalign::cmd_generate(spec, seed, out);
      std::printf("wrote %s and %s.classes\n", out.c_str(), out.c_str());
    } else if (featurize->parsed()) {
      tsalign::AlignmentConfig config{tsalign::parse_method(method_name), n, seed};
      tsalign::cmd_featurize(data_path, config, out);
      std::printf("wrote %s\n", out.c_str());
    } else if (train->parsed()) {
      tsalign::RunConfig config;
      config.alignment = {tsalign::parse_method(method_name), n, seed};
      config.folds = folds;
      config.pca_grid = pca_grid;
      config.knn_grid = knn_grid;
      config.rf_grid = rf_grid;
      config.out_dir = out;
      config.seed = seed;
      const auto result = tsalign::cmd_train(config, features_path);
      for (const auto& point : result.infeasible) {
        std::fprintf(stderr, "note: skipped infeasible pca_k=%zu (%s %zu)\n", point.pca_k,
                     tsalign::to_string(point.classifier), point.param);
      }
      const auto& best = result.table[result.best_index];
      std::printf("best: pca_k=%zu %s=%zu mean_cv_accuracy=%s\n", best.point.pca_k,
                  tsalign::to_string(best.point.classifier), best.point.param,
                  tsalign::format_double_min_sig(best.mean_accuracy, 6).c_str());
    } else if (evaluate->parsed()) {
      const auto report = tsalign::cmd_evaluate(pipeline_path, features_path, out);
      std::printf("accuracy: %s\n",
                  tsalign::format_double_min_sig(report.accuracy, 6).c_str());
    } else if (run_all->parsed()) {
      tsalign::RunConfig config;
      if (!data_path.empty()) config.dataset_path = data_path;
      if (synthetic) {
        const LenRange len = parse_len(len_text);
        tsalign::SyntheticSpec spec;
        spec.num_classes = classes;
        spec.jobs_per_class = per_class;
        spec.min_length = len.min_length;
        spec.max_length = len.max_length;
        spec.channels = channels;
        spec.placement = parse_placement(placement);
        spec.noise_std = noise_std;
        config.synthetic = spec;
      }
      config.alignment = {tsalign::parse_method(method_name), n, seed};
      config.test_fraction = test_fraction;
      config.folds = folds;
      config.pca_grid = pca_grid;
      config.knn_grid = knn_grid;
      config.rf_grid = rf_grid;
      config.out_dir = out;
      config.seed = seed;
      const auto report = tsalign::cmd_run_all(config);
      std::printf("accuracy: %s (report in %s)\n",
                  tsalign::format_double_min_sig(report.accuracy, 6).c_str(), out.c_str());
    } else if (bench->parsed()) {
      std::vector<tsalign::AlignmentConfig> configs;
      for (const auto& name : bench_methods) {
        const auto method = tsalign::parse_method(name);
        for (std::size_t value : bench_n) configs.push_back({method, value, seed});
      }
      const auto records = tsalign::cmd_bench(data_path, configs, reps, out);
      std::fputs(tsalign::bench_table(records).c_str(), stdout);
    }
  } catch (const tsalign::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
