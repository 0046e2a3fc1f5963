#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsalign/dataset.hpp"
#include "tsalign/feature_matrix.hpp"
#include "tsalign/rng.hpp"

namespace tsalign {

/// The six per-channel alignment methods. Each maps a series of any
/// qualifying length to exactly n values.
enum class AlignMethod {
  Start,        // first n samples
  Middle,       // centered n samples
  Random,       // contiguous window at a seeded random offset
  WindowMean,   // mean of each of n contiguous windows
  WindowStd,    // population std of each of n contiguous windows
  FourierTopN,  // n largest one-sided DFT magnitudes, descending
};

enum class WindowStat { Mean, Std };

/// Method + n fully determine the output dimensionality n*C. The seed is
/// consumed only by Random.
struct AlignmentConfig {
  AlignMethod method = AlignMethod::WindowMean;
  std::size_t n = 100;
  std::uint64_t seed = 0;

  bool operator==(const AlignmentConfig&) const = default;
};

/// CLI vocabulary: start, middle, random, window-mean, window-std, fourier.
const char* to_string(AlignMethod method);
AlignMethod parse_method(const std::string& name);
std::vector<AlignMethod> all_methods();

std::vector<double> subset_start(std::span<const double> series, std::size_t n);
std::vector<double> subset_middle(std::span<const double> series, std::size_t n);

/// Contiguous window starting at an offset drawn uniformly from {0..L-n}
/// using the supplied stream.
std::vector<double> subset_random(std::span<const double> series, std::size_t n,
                                  rng::Stream& stream);

/// Splits the series into n windows, window w covering
/// [floor(w*L/n), floor((w+1)*L/n)), and reduces each to one statistic.
std::vector<double> window_stats(std::span<const double> series, std::size_t n,
                                 WindowStat stat);

/// n largest one-sided DFT magnitudes in descending order (magnitude ties
/// break toward the lower frequency bin), zero-padded when the series has
/// fewer than n one-sided bins. Works for any L >= 1.
std::vector<double> fourier_top_n(std::span<const double> series, std::size_t n);

/// Applies the configured method to every channel of every job. Row j,
/// column s*C + c holds feature s of channel c of job j. For Random, one
/// offset per job is shared by all of its channels.
FeatureMatrix align_dataset(const LabeledDataset& dataset, const AlignmentConfig& config);

}  // namespace tsalign
