#pragma once

#include <vector>

#include "tsalign/feature_matrix.hpp"

namespace tsalign {

/// Principal components of the fitting data. Component rows are orthonormal;
/// explained variances are the sample covariance eigenvalues in descending
/// order. Sign convention: each component's largest-magnitude entry is
/// positive, which makes the fit bit-stable.
struct PcaModel {
  std::vector<double> mean;                     // length d
  std::vector<std::vector<double>> components;  // k rows of length d
  std::vector<double> explained_variance;       // length k, non-increasing

  std::size_t input_dim() const { return mean.size(); }
  std::size_t output_dim() const { return components.size(); }

  bool operator==(const PcaModel&) const = default;
};

/// Requires 2 <= rows and 1 <= k <= min(rows-1, cols). Infeasible k is an
/// error, never a silent clamp.
PcaModel fit_pca(const FeatureMatrix& matrix, std::size_t k);

/// (m - mean) * components^T, shape rows x k.
FeatureMatrix project(const PcaModel& model, const FeatureMatrix& matrix);

}  // namespace tsalign
