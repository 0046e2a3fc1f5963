#pragma once

#include <vector>

#include "tsalign/feature_matrix.hpp"

namespace tsalign {

/// Per-column min-max map fitted on training data only.
struct ScalerModel {
  std::vector<double> mins;
  std::vector<double> maxs;

  std::size_t num_columns() const { return mins.size(); }

  bool operator==(const ScalerModel&) const = default;
};

ScalerModel fit_minmax(const FeatureMatrix& train);

/// out[i][j] = (m[i][j] - min[j]) / (max[j] - min[j]). Degenerate columns
/// (max == min) map to 0. Values are not clipped, so test data outside the
/// training range lands outside [0, 1].
FeatureMatrix transform_minmax(const ScalerModel& model, const FeatureMatrix& matrix);

}  // namespace tsalign
