#include "tsalign/metrics.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tsalign/errors.hpp"
#include "tsalign/io_util.hpp"

namespace tsalign {

namespace {

constexpr int kFormatVersion = 1;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void append_double_array(std::string& out, const std::vector<double>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_double(values[i]);
  }
  out += ']';
}

void append_bool_array(std::string& out, const std::vector<bool>& values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += values[i] ? "true" : "false";
  }
  out += ']';
}

std::filesystem::path with_suffix(const std::filesystem::path& path, const char* suffix) {
  std::filesystem::path stem = path;
  if (stem.extension() == ".json") stem.replace_extension();
  stem += suffix;
  return stem;
}

nlohmann::json parse_json(const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::MalformedRow, "invalid JSON in " + path.string());
  }
  if (!doc.is_object() || doc.value("format_version", -1) != kFormatVersion) {
    throw Error(ErrorCode::MalformedRow, "unsupported format_version in " + path.string());
  }
  return doc;
}

}  // namespace

std::filesystem::path confusion_csv_path(const std::filesystem::path& report_path) {
  return with_suffix(report_path, ".confusion.csv");
}

std::filesystem::path timings_path(const std::filesystem::path& report_path) {
  return with_suffix(report_path, ".timings.json");
}

void emit_report(const MetricsReport& report, const std::filesystem::path& path) {
  std::string out;
  out += "{\n";
  out += "  \"format_version\": 1,\n";
  out += "  \"alignment\": {\n";
  out += "    \"method\": \"" + report.alignment_method + "\",\n";
  out += "    \"n\": " + std::to_string(report.n) + ",\n";
  out += "    \"seed\": " + std::to_string(report.alignment_seed) + "\n";
  out += "  },\n";
  out += "  \"global_seed\": " + std::to_string(report.global_seed) + ",\n";
  out += "  \"grid_point\": {\n";
  out += "    \"pca_k\": " + std::to_string(report.point.pca_k) + ",\n";
  out += std::string("    \"classifier\": \"") + to_string(report.point.classifier) + "\",\n";
  out += "    \"param\": " + std::to_string(report.point.param) + "\n";
  out += "  },\n";
  out += "  \"accuracy\": " + format_double_min_sig(report.accuracy, 6) + ",\n";
  out += "  \"precision\": ";
  append_double_array(out, report.precision);
  out += ",\n  \"precision_defined\": ";
  append_bool_array(out, report.precision_defined);
  out += ",\n  \"recall\": ";
  append_double_array(out, report.recall);
  out += ",\n  \"recall_defined\": ";
  append_bool_array(out, report.recall_defined);
  out += ",\n  \"confusion\": [";
  for (std::size_t r = 0; r < report.confusion.size(); ++r) {
    out += r ? ",\n               [" : "[";
    for (std::size_t c = 0; c < report.confusion[r].size(); ++c) {
      if (c) out += ", ";
      out += std::to_string(report.confusion[r][c]);
    }
    out += ']';
  }
  out += "]\n}\n";
  write_file(path, out);

  std::string csv = "true_label";
  for (std::size_t c = 0; c < report.confusion.size(); ++c) {
    csv += ",pred_" + std::to_string(c);
  }
  csv += '\n';
  for (std::size_t r = 0; r < report.confusion.size(); ++r) {
    csv += std::to_string(r);
    for (std::size_t c = 0; c < report.confusion[r].size(); ++c) {
      csv += ',' + std::to_string(report.confusion[r][c]);
    }
    csv += '\n';
  }
  write_file(confusion_csv_path(path), csv);

  std::string timings = "{\n  \"format_version\": 1,\n  \"timings_ms\": {\n";
  timings += "    \"featurize\": " + format_double(report.timings.featurize_ms) + ",\n";
  timings += "    \"scale\": " + format_double(report.timings.scale_ms) + ",\n";
  timings += "    \"pca\": " + format_double(report.timings.pca_ms) + ",\n";
  timings += "    \"fit\": " + format_double(report.timings.fit_ms) + ",\n";
  timings += "    \"predict\": " + format_double(report.timings.predict_ms) + "\n";
  timings += "  }\n}\n";
  write_file(timings_path(path), timings);
}

MetricsReport parse_report(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_json(path);
  MetricsReport report;
  try {
    report.alignment_method = doc.at("alignment").at("method").get<std::string>();
    report.n = doc.at("alignment").at("n").get<std::size_t>();
    report.alignment_seed = doc.at("alignment").at("seed").get<std::uint64_t>();
    report.global_seed = doc.at("global_seed").get<std::uint64_t>();
    report.point.pca_k = doc.at("grid_point").at("pca_k").get<std::size_t>();
    const auto classifier = doc.at("grid_point").at("classifier").get<std::string>();
    if (classifier == "knn") {
      report.point.classifier = ClassifierKind::Knn;
    } else if (classifier == "rf") {
      report.point.classifier = ClassifierKind::RandomForest;
    } else {
      throw Error(ErrorCode::MalformedRow, "unknown classifier '" + classifier + "'");
    }
    report.point.param = doc.at("grid_point").at("param").get<std::size_t>();
    report.accuracy = doc.at("accuracy").get<double>();
    report.precision = doc.at("precision").get<std::vector<double>>();
    report.precision_defined = doc.at("precision_defined").get<std::vector<bool>>();
    report.recall = doc.at("recall").get<std::vector<double>>();
    report.recall_defined = doc.at("recall_defined").get<std::vector<bool>>();
    report.confusion = doc.at("confusion").get<std::vector<std::vector<std::int64_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRow, "bad report schema in " + path.string() + ": " + e.what());
  }

  const auto companion = timings_path(path);
  if (std::filesystem::exists(companion)) {
    const nlohmann::json tdoc = parse_json(companion);
    try {
      const auto& t = tdoc.at("timings_ms");
      report.timings.featurize_ms = t.at("featurize").get<double>();
      report.timings.scale_ms = t.at("scale").get<double>();
      report.timings.pca_ms = t.at("pca").get<double>();
      report.timings.fit_ms = t.at("fit").get<double>();
      report.timings.predict_ms = t.at("predict").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRow,
                  "bad timings schema in " + companion.string() + ": " + e.what());
    }
  }
  return report;
}

std::vector<BenchRecord> bench_featurize(const LabeledDataset& dataset,
                                         const std::vector<AlignmentConfig>& configs,
                                         std::size_t repetitions) {
  if (repetitions == 0) throw Error(ErrorCode::InvalidSpec, "need at least one repetition");
  std::size_t samples = 0;
  for (const auto& job : dataset.jobs) {
    samples += job.length() * dataset.channels.size();
  }

  std::vector<BenchRecord> records;
  records.reserve(configs.size());
  for (const auto& config : configs) {
    double best = 0.0;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      const FeatureMatrix features = align_dataset(dataset, config);
      const auto stop = std::chrono::steady_clock::now();
      if (features.rows != dataset.jobs.size()) {
        throw Error(ErrorCode::DimensionMismatch, "benchmark produced wrong row count");
      }
      const double elapsed = std::chrono::duration<double>(stop - start).count();
      if (rep == 0 || elapsed < best) best = elapsed;
    }
    best = std::max(best, 1e-9);
    BenchRecord record;
    record.method = to_string(config.method);
    record.n = config.n;
    record.samples = samples;
    record.elapsed_seconds = best;
    record.throughput = static_cast<double>(samples) / best;
    records.push_back(std::move(record));
  }
  return records;
}

std::string bench_table(const std::vector<BenchRecord>& records) {
  std::vector<std::array<std::string, 5>> cells;
  cells.push_back({"method", "n", "samples", "ms", "samples/s"});
  for (const auto& r : records) {
    char ms[64];
    char rate[64];
    std::snprintf(ms, sizeof(ms), "%.3f", r.elapsed_seconds * 1e3);
    std::snprintf(rate, sizeof(rate), "%.1f", r.throughput);
    cells.push_back({r.method, std::to_string(r.n), std::to_string(r.samples), ms, rate});
  }

  std::array<std::size_t, 5> widths{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      // Left-align the method column, right-align the numeric ones.
      const std::size_t pad = widths[c] - row[c].size();
      if (c == 0) {
        out += row[c];
        out.append(pad, ' ');
      } else {
        out.append(pad, ' ');
        out += row[c];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

void emit_bench(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  std::string out = "{\n  \"format_version\": 1,\n  \"records\": [";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out += i ? ",\n    {" : "\n    {";
    out += "\"method\": \"" + r.method + "\", ";
    out += "\"n\": " + std::to_string(r.n) + ", ";
    out += "\"samples\": " + std::to_string(r.samples) + ", ";
    out += "\"elapsed_seconds\": " + format_double(r.elapsed_seconds) + ", ";
    out += "\"throughput\": " + format_double(r.throughput) + "}";
  }
  out += records.empty() ? "]\n}\n" : "\n  ]\n}\n";
  write_file(path, out);
}

std::vector<BenchRecord> parse_bench(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_json(path);
  std::vector<BenchRecord> records;
  try {
    for (const auto& item : doc.at("records")) {
      BenchRecord record;
      record.method = item.at("method").get<std::string>();
      record.n = item.at("n").get<std::size_t>();
      record.samples = item.at("samples").get<std::size_t>();
      record.elapsed_seconds = item.at("elapsed_seconds").get<double>();
      record.throughput = item.at("throughput").get<double>();
      records.push_back(std::move(record));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedRow, "bad bench schema in " + path.string() + ": " + e.what());
  }
  return records;
}

}  // namespace tsalign
