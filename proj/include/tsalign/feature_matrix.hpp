#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tsalign {

/// Dense row-major matrix of per-trial features, one row per job. Column
/// layout is sample-major: column s*C + c holds feature slot s of channel c.
/// Every entry is finite; rows carry the originating job id and class label.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;          // rows * cols, row-major
  std::vector<std::string> job_ids;  // size rows
  std::vector<int> labels;           // size rows

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) {
    return std::span<double>(data.data() + r * cols, cols);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data.data() + r * cols, cols);
  }

  /// Same shape and metadata, zero-filled data.
  static FeatureMatrix zeros_like(const FeatureMatrix& other, std::size_t cols);

  bool operator==(const FeatureMatrix& other) const = default;
};

/// Copy of the given rows, in the given order, metadata included.
FeatureMatrix select_rows(const FeatureMatrix& matrix, std::span<const std::size_t> rows);

/// CSV with header `job_id,label,f0,...`; floats written round-trip exact.
void save_features(const FeatureMatrix& matrix, const std::filesystem::path& path);
FeatureMatrix load_features(const std::filesystem::path& path);

}  // namespace tsalign
