#include "tsalign/feature_matrix.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tsalign/errors.hpp"
#include "tsalign/io_util.hpp"

namespace tsalign {

FeatureMatrix FeatureMatrix::zeros_like(const FeatureMatrix& other,
                                        std::size_t cols) {
  FeatureMatrix out;
  out.rows = other.rows;
  out.cols = cols;
  out.data.assign(other.rows * cols, 0.0);
  out.job_ids = other.job_ids;
  out.labels = other.labels;
  return out;
}

FeatureMatrix select_rows(const FeatureMatrix& matrix, std::span<const std::size_t> rows) {
  FeatureMatrix out;
  out.rows = rows.size();
  out.cols = matrix.cols;
  out.data.reserve(rows.size() * matrix.cols);
  out.job_ids.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto row = matrix.row(r);
    out.data.insert(out.data.end(), row.begin(), row.end());
    out.job_ids.push_back(matrix.job_ids[r]);
    out.labels.push_back(matrix.labels[r]);
  }
  return out;
}

void save_features(const FeatureMatrix& matrix, const std::filesystem::path& path) {
  if (matrix.rows == 0) {
    throw Error(ErrorCode::EmptyMatrix, "refusing to write empty feature matrix");
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  }
  out << "job_id,label";
  for (std::size_t c = 0; c < matrix.cols; ++c) out << ",f" << c;
  out << '\n';
  for (std::size_t r = 0; r < matrix.rows; ++r) {
    out << matrix.job_ids[r] << ',' << matrix.labels[r];
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      out << ',' << format_double(matrix.at(r, c));
    }
    out << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
  }
}

FeatureMatrix load_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::EmptyMatrix, "no header row in " + path.string());
  }
  const auto header = split_fields(strip_cr(line));
  if (header.size() < 3 || header[0] != "job_id" || header[1] != "label") {
    throw Error(ErrorCode::MalformedRow, "bad feature header in " + path.string());
  }
  const std::size_t cols = header.size() - 2;

  FeatureMatrix matrix;
  matrix.cols = cols;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto sv = strip_cr(line);
    if (sv.empty()) continue;
    const auto fields = split_fields(sv);
    if (fields.size() != cols + 2) {
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(cols + 2) + " fields, got " +
                      std::to_string(fields.size()));
    }
    std::int64_t label = 0;
    if (!parse_i64(fields[1], label) || label < 0) {
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": bad label");
    }
    matrix.job_ids.emplace_back(fields[0]);
    matrix.labels.push_back(static_cast<int>(label));
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c + 2], v) || !std::isfinite(v)) {
        throw Error(ErrorCode::MalformedRow,
                    "line " + std::to_string(line_no) + ": bad value in f" +
                        std::to_string(c));
      }
      matrix.data.push_back(v);
    }
    ++matrix.rows;
  }
  if (matrix.rows == 0) {
    throw Error(ErrorCode::EmptyMatrix, "no data rows in " + path.string());
  }
  return matrix;
}

}  // namespace tsalign
