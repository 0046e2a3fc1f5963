#include "tsalign/alignment.hpp"

#include <algorithm>
#include <cmath>

#include "tsalign/errors.hpp"
#include "tsalign/fft.hpp"

namespace tsalign {

namespace {

void require_length(std::size_t length, std::size_t n, const std::string& context) {
  if (length < n) {
    throw Error(ErrorCode::InsufficientLength,
                context + ": series length " + std::to_string(length) +
                    " is shorter than n=" + std::to_string(n));
  }
}

std::vector<double> copy_window(std::span<const double> series, std::size_t offset,
                                std::size_t n) {
  return std::vector<double>(series.begin() + static_cast<std::ptrdiff_t>(offset),
                             series.begin() + static_cast<std::ptrdiff_t>(offset + n));
}

bool needs_full_length(AlignMethod method) {
  return method != AlignMethod::FourierTopN;
}

}  // namespace

const char* to_string(AlignMethod method) {
  switch (method) {
    case AlignMethod::Start: return "start";
    case AlignMethod::Middle: return "middle";
    case AlignMethod::Random: return "random";
    case AlignMethod::WindowMean: return "window-mean";
    case AlignMethod::WindowStd: return "window-std";
    case AlignMethod::FourierTopN: return "fourier";
  }
  return "unknown";
}

AlignMethod parse_method(const std::string& name) {
  for (const AlignMethod method : all_methods()) {
    if (name == to_string(method)) return method;
  }
  throw Error(ErrorCode::InvalidSpec,
              "unknown method '" + name +
                  "' (valid: start, middle, random, window-mean, window-std, fourier)");
}

std::vector<AlignMethod> all_methods() {
  return {AlignMethod::Start,      AlignMethod::Middle,    AlignMethod::Random,
          AlignMethod::WindowMean, AlignMethod::WindowStd, AlignMethod::FourierTopN};
}

std::vector<double> subset_start(std::span<const double> series, std::size_t n) {
  require_length(series.size(), n, "start");
  return copy_window(series, 0, n);
}

std::vector<double> subset_middle(std::span<const double> series, std::size_t n) {
  require_length(series.size(), n, "middle");
  return copy_window(series, (series.size() - n) / 2, n);
}

std::vector<double> subset_random(std::span<const double> series, std::size_t n,
                                  rng::Stream& stream) {
  require_length(series.size(), n, "random");
  const std::size_t offset = stream.next_below(series.size() - n + 1);
  return copy_window(series, offset, n);
}

std::vector<double> window_stats(std::span<const double> series, std::size_t n,
                                 WindowStat stat) {
  const std::size_t length = series.size();
  require_length(length, n, "window");
  std::vector<double> out(n);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t begin = w * length / n;
    const std::size_t end = (w + 1) * length / n;
    const auto count = static_cast<double>(end - begin);
    double sum = 0.0;
    for (std::size_t t = begin; t < end; ++t) sum += series[t];
    const double mean = sum / count;
    if (stat == WindowStat::Mean) {
      out[w] = mean;
    } else {
      double sq = 0.0;
      for (std::size_t t = begin; t < end; ++t) {
        const double d = series[t] - mean;
        sq += d * d;
      }
      out[w] = std::sqrt(sq / count);
    }
  }
  return out;
}

std::vector<double> fourier_top_n(std::span<const double> series, std::size_t n) {
  if (series.empty()) {
    throw Error(ErrorCode::EmptySeries, "Fourier features need at least one sample");
  }
  const auto magnitudes = fft::one_sided_magnitudes(series);
  std::vector<std::size_t> order(magnitudes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (magnitudes[a] != magnitudes[b]) return magnitudes[a] > magnitudes[b];
    return a < b;
  });
  std::vector<double> out(n, 0.0);
  const std::size_t take = std::min(n, magnitudes.size());
  for (std::size_t i = 0; i < take; ++i) out[i] = magnitudes[order[i]];
  return out;
}

FeatureMatrix align_dataset(const LabeledDataset& dataset, const AlignmentConfig& config) {
  if (dataset.jobs.empty() || dataset.channels.empty()) {
    throw Error(ErrorCode::EmptyDataset, "nothing to align");
  }
  if (config.n < 1) {
    throw Error(ErrorCode::InvalidSpec, "n must be >= 1");
  }

  // Length preconditions are checked up front so the error names the first
  // offending job in dataset order regardless of thread schedule.
  if (needs_full_length(config.method)) {
    for (const auto& job : dataset.jobs) {
      if (job.length() < config.n) {
        throw Error(ErrorCode::InsufficientLength,
                    "job '" + job.job_id + "' has length " +
                        std::to_string(job.length()) + " < n=" +
                        std::to_string(config.n));
      }
    }
  }

  const std::size_t num_channels = dataset.num_channels();
  FeatureMatrix matrix;
  matrix.rows = dataset.jobs.size();
  matrix.cols = config.n * num_channels;
  matrix.data.assign(matrix.rows * matrix.cols, 0.0);
  matrix.job_ids.resize(matrix.rows);
  matrix.labels.resize(matrix.rows);

#pragma omp parallel for schedule(dynamic)
  for (long long j = 0; j < static_cast<long long>(dataset.jobs.size()); ++j) {
    const auto row = static_cast<std::size_t>(j);
    const JobRecord& job = dataset.jobs[row];
    matrix.job_ids[row] = job.job_id;
    matrix.labels[row] = job.label;

    // One offset per job, shared across channels, from the job's own stream.
    std::size_t random_offset = 0;
    if (config.method == AlignMethod::Random) {
      rng::Stream stream(rng::derive(config.seed, "random-window", row));
      random_offset = stream.next_below(job.length() - config.n + 1);
    }

    for (std::size_t c = 0; c < num_channels; ++c) {
      const std::span<const double> series(job.channels[c]);
      std::vector<double> features;
      switch (config.method) {
        case AlignMethod::Start:
          features = subset_start(series, config.n);
          break;
        case AlignMethod::Middle:
          features = subset_middle(series, config.n);
          break;
        case AlignMethod::Random:
          features = std::vector<double>(
              series.begin() + static_cast<std::ptrdiff_t>(random_offset),
              series.begin() + static_cast<std::ptrdiff_t>(random_offset + config.n));
          break;
        case AlignMethod::WindowMean:
          features = window_stats(series, config.n, WindowStat::Mean);
          break;
        case AlignMethod::WindowStd:
          features = window_stats(series, config.n, WindowStat::Std);
          break;
        case AlignMethod::FourierTopN:
          features = fourier_top_n(series, config.n);
          break;
      }
      for (std::size_t s = 0; s < config.n; ++s) {
        matrix.at(row, s * num_channels + c) = features[s];
      }
    }
  }
  return matrix;
}

}  // namespace tsalign
