#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsalign/alignment.hpp"
#include "tsalign/dataset.hpp"
#include "tsalign/model_selection.hpp"

namespace tsalign {

struct BenchRecord {
  std::string method;
  std::size_t n = 0;
  std::size_t samples = 0;       // sum over jobs of length * channels
  double elapsed_seconds = 0.0;  // best of repetitions
  double throughput = 0.0;       // samples / elapsed_seconds

  bool operator==(const BenchRecord&) const = default;
};

/// Writes `path` (deterministic report JSON) plus two companions next to it:
/// a confusion-matrix CSV and a timings JSON. Timings live in their own file
/// so the main report is byte-stable across runs.
void emit_report(const MetricsReport& report, const std::filesystem::path& path);

/// Reads a report written by emit_report, timings companion included.
MetricsReport parse_report(const std::filesystem::path& path);

std::filesystem::path confusion_csv_path(const std::filesystem::path& report_path);
std::filesystem::path timings_path(const std::filesystem::path& report_path);

/// Times each config over the whole dataset, keeping the best of
/// `repetitions` runs. Configs run sequentially.
std::vector<BenchRecord> bench_featurize(const LabeledDataset& dataset,
                                         const std::vector<AlignmentConfig>& configs,
                                         std::size_t repetitions);

/// Aligned text table with columns: method, n, samples, ms, samples/s.
std::string bench_table(const std::vector<BenchRecord>& records);

void emit_bench(const std::vector<BenchRecord>& records, const std::filesystem::path& path);
std::vector<BenchRecord> parse_bench(const std::filesystem::path& path);

}  // namespace tsalign
