#include "tsalign/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsalign/errors.hpp"

namespace tsalign {

namespace {

struct Eigen {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // column i pairs with values[i], row-major n*n
};

/// Cyclic-by-row Jacobi for a symmetric matrix. Orthonormal eigenvectors to
/// machine precision, eigenvalues sorted descending.
Eigen jacobi_eigen(std::vector<double> a, std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double frobenius = 0.0;
  for (double x : a) frobenius += x * x;
  frobenius = std::sqrt(frobenius);
  const double stop = std::max(1e-307, frobenius * 1e-15);

  for (int sweep = 0; sweep < 64 && n >= 2; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a[p * n + q] * a[p * n + q];
    }
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a[i * n + p];
          const double aiq = a[i * n + q];
          a[i * n + p] = c * aip - s * aiq;
          a[i * n + q] = s * aip + c * aiq;
          a[p * n + i] = a[i * n + p];
          a[q * n + i] = a[i * n + q];
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i * n + p];
          const double viq = v[i * n + q];
          v[i * n + p] = c * vip - s * viq;
          v[i * n + q] = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x * n + x] > a[y * n + y]; });

  Eigen out;
  out.values.resize(n);
  out.vectors.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a[order[i] * n + order[i]];
    for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + i] = v[r * n + order[i]];
  }
  return out;
}

void fix_sign(std::vector<double>& component) {
  std::size_t arg_max = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < component.size(); ++i) {
    const double magnitude = std::fabs(component[i]);
    if (magnitude > best) {
      best = magnitude;
      arg_max = i;
    }
  }
  if (component[arg_max] < 0.0) {
    for (double& x : component) x = -x;
  }
}

/// Deterministic orthonormal completion for zero-variance directions: the
/// first standard basis vector with a non-negligible residual after
/// projecting out the accepted components.
std::vector<double> orthonormal_fill(const std::vector<std::vector<double>>& components,
                                     std::size_t d) {
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::vector<double> w(d, 0.0);
    w[axis] = 1.0;
    for (const auto& comp : components) {
      double dot = comp[axis];
      for (std::size_t i = 0; i < d; ++i) w[i] -= dot * comp[i];
    }
    double norm_sq = 0.0;
    for (double x : w) norm_sq += x * x;
    if (norm_sq > 1e-8) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (double& x : w) x *= inv;
      return w;
    }
  }
  throw Error(ErrorCode::RankTooSmall, "cannot complete orthonormal basis");
}

}  // namespace

PcaModel fit_pca(const FeatureMatrix& matrix, std::size_t k) {
  const std::size_t rows = matrix.rows;
  const std::size_t cols = matrix.cols;
  if (rows < 2) {
    throw Error(ErrorCode::DegenerateInput, "need at least 2 rows to fit");
  }
  const std::size_t bound = std::min(rows - 1, cols);
  if (k < 1 || k > bound) {
    throw Error(ErrorCode::RankTooSmall,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(bound) +
                    "] for a " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " matrix");
  }

  PcaModel model;
  model.mean.assign(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) model.mean[c] += matrix.at(r, c);
  }
  for (double& m : model.mean) m /= static_cast<double>(rows);

  std::vector<double> centered(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      centered[r * cols + c] = matrix.at(r, c) - model.mean[c];
    }
  }

  const double divisor = static_cast<double>(rows - 1);
  model.components.reserve(k);
  model.explained_variance.reserve(k);

  if (cols <= rows) {
    // Covariance route: eigendecompose X^T X / (rows-1), d x d.
    std::vector<double> cov(cols * cols, 0.0);
#pragma omp parallel for schedule(static)
    for (long long ci = 0; ci < static_cast<long long>(cols); ++ci) {
      const auto i = static_cast<std::size_t>(ci);
      for (std::size_t j = i; j < cols; ++j) {
        double sum = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          sum += centered[r * cols + i] * centered[r * cols + j];
        }
        cov[i * cols + j] = sum / divisor;
        cov[j * cols + i] = cov[i * cols + j];
      }
    }
    const Eigen eig = jacobi_eigen(std::move(cov), cols);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> comp(cols);
      for (std::size_t r = 0; r < cols; ++r) comp[r] = eig.vectors[r * cols + i];
      fix_sign(comp);
      model.components.push_back(std::move(comp));
      model.explained_variance.push_back(std::max(0.0, eig.values[i]));
    }
  } else {
    // Gram route: eigendecompose X X^T (rows x rows) and map left singular
    // vectors to right ones, v = X^T u / sigma. Much smaller problem when
    // there are far fewer rows than feature columns.
    std::vector<double> gram(rows * rows, 0.0);
#pragma omp parallel for schedule(static)
    for (long long ri = 0; ri < static_cast<long long>(rows); ++ri) {
      const auto i = static_cast<std::size_t>(ri);
      for (std::size_t j = i; j < rows; ++j) {
        double sum = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
          sum += centered[i * cols + c] * centered[j * cols + c];
        }
        gram[i * rows + j] = sum;
        gram[j * rows + i] = sum;
      }
    }
    const Eigen eig = jacobi_eigen(std::move(gram), rows);
    const double scale_floor = std::max(eig.values[0], 0.0) * 1e-12 + 1e-300;
    for (std::size_t i = 0; i < k; ++i) {
      const double lambda = std::max(0.0, eig.values[i]);
      std::vector<double> comp;
      if (lambda > scale_floor) {
        comp.assign(cols, 0.0);
        const double inv_sigma = 1.0 / std::sqrt(lambda);
#pragma omp parallel for schedule(static)
        for (long long cc = 0; cc < static_cast<long long>(cols); ++cc) {
          const auto c = static_cast<std::size_t>(cc);
          double sum = 0.0;
          for (std::size_t r = 0; r < rows; ++r) {
            sum += centered[r * cols + c] * eig.vectors[r * rows + i];
          }
          comp[c] = sum * inv_sigma;
        }
      } else {
        comp = orthonormal_fill(model.components, cols);
      }
      fix_sign(comp);
      model.components.push_back(std::move(comp));
      model.explained_variance.push_back(lambda / divisor);
    }
  }
  return model;
}

FeatureMatrix project(const PcaModel& model, const FeatureMatrix& matrix) {
  if (matrix.cols != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix has " + std::to_string(matrix.cols) + " columns, model expects " +
                    std::to_string(model.input_dim()));
  }
  const std::size_t k = model.output_dim();
  FeatureMatrix out = FeatureMatrix::zeros_like(matrix, k);
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < static_cast<long long>(matrix.rows); ++r) {
    const auto row = static_cast<std::size_t>(r);
    for (std::size_t i = 0; i < k; ++i) {
      double sum = 0.0;
      const auto& comp = model.components[i];
      for (std::size_t c = 0; c < matrix.cols; ++c) {
        sum += (matrix.at(row, c) - model.mean[c]) * comp[c];
      }
      out.at(row, i) = sum;
    }
  }
  return out;
}

}  // namespace tsalign
