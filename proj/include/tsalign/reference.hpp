#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tsalign::reference {

// Serial, deliberately naive implementations kept as independent checks for
// the parallel kernels. None of these share code with the library paths they
// verify; tests and the kernel benchmark compare against them.

/// Per-window mean via a plain two-pass loop over floor-boundary windows.
std::vector<double> window_mean(std::span<const double> series, std::size_t n);

/// Per-window population standard deviation, same window rule.
std::vector<double> window_std(std::span<const double> series, std::size_t n);

/// O(L^2) DFT by direct summation, all L bins.
std::vector<std::complex<double>> naive_dft(std::span<const double> series);

/// One-sided magnitudes sorted descending (ties by ascending bin), padded
/// with zeros to `n`, built on the naive DFT.
std::vector<double> naive_fourier_top(std::span<const double> series, std::size_t n);

/// Exhaustive k-nearest-neighbor vote for one query row. Tie rules: distance
/// ties by lower training row, vote ties by smaller summed neighbor distance,
/// then by lower class index.
int brute_force_knn(std::span<const double> query,
                    const std::vector<std::vector<double>>& train,
                    std::span<const int> labels, std::size_t k);

struct EigenDecomposition {
  std::vector<double> values;               // descending
  std::vector<std::vector<double>> vectors; // vectors[i] pairs with values[i]
};

/// Classical Jacobi (largest off-diagonal pivot) eigensolver for a symmetric
/// matrix given in row-major order.
EigenDecomposition symmetric_eigen(const std::vector<double>& matrix, std::size_t n);

}  // namespace tsalign::reference
