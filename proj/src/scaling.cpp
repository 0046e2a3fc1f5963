#include "tsalign/scaling.hpp"

#include "tsalign/errors.hpp"

namespace tsalign {

ScalerModel fit_minmax(const FeatureMatrix& train) {
  if (train.rows == 0 || train.cols == 0) {
    throw Error(ErrorCode::EmptyMatrix, "cannot fit scaler on empty matrix");
  }
  ScalerModel model;
  model.mins.assign(train.cols, 0.0);
  model.maxs.assign(train.cols, 0.0);
  for (std::size_t c = 0; c < train.cols; ++c) {
    double lo = train.at(0, c);
    double hi = lo;
    for (std::size_t r = 1; r < train.rows; ++r) {
      const double v = train.at(r, c);
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    model.mins[c] = lo;
    model.maxs[c] = hi;
  }
  return model;
}

FeatureMatrix transform_minmax(const ScalerModel& model, const FeatureMatrix& matrix) {
  if (matrix.cols != model.num_columns()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix has " + std::to_string(matrix.cols) + " columns, scaler fit on " +
                    std::to_string(model.num_columns()));
  }
  FeatureMatrix out = matrix;
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < static_cast<long long>(matrix.rows); ++r) {
    const auto row = static_cast<std::size_t>(r);
    for (std::size_t c = 0; c < matrix.cols; ++c) {
      const double range = model.maxs[c] - model.mins[c];
      out.at(row, c) = range == 0.0 ? 0.0 : (matrix.at(row, c) - model.mins[c]) / range;
    }
  }
  return out;
}

}  // namespace tsalign
