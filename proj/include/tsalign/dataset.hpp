#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tsalign {

struct ChannelId {
  std::size_t index = 0;
  std::string name;

  bool operator==(const ChannelId&) const = default;
};

/// One labelled job: C synchronized channels of equal length. Lengths vary
/// from job to job; that variation is what the alignment methods remove.
struct JobRecord {
  std::string job_id;
  int label = 0;
  std::vector<std::vector<double>> channels;  // C sequences, equal length

  std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }

  bool operator==(const JobRecord&) const = default;
};

struct LabeledDataset {
  std::vector<ChannelId> channels;
  std::vector<JobRecord> jobs;
  std::vector<std::string> class_names;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_classes() const { return class_names.size(); }

  bool operator==(const LabeledDataset&) const = default;
};

enum class SignaturePlacement { Uniform, Delayed };

/// Recipe for a synthetic labelled dataset: each class gets distinct sinusoid
/// frequencies and per-channel mean offsets on top of Gaussian noise.
struct SyntheticSpec {
  std::size_t num_classes = 5;
  std::size_t jobs_per_class = 40;
  std::size_t min_length = 200;
  std::size_t max_length = 5000;
  std::size_t channels = 7;
  SignaturePlacement placement = SignaturePlacement::Uniform;
  double noise_std = 0.1;
};

/// Delayed placement starts the class signature at this sample index; every
/// earlier sample comes from the class-independent noise process.
inline constexpr std::size_t kDelayedSignatureStart = 2000;

/// Mean offset of (class, channel) in noise-free synthetic data.
double synthetic_offset(int class_index, std::size_t channel);

/// Whole number of sinusoid cycles a (class, channel) signature completes
/// over its signature region.
std::size_t synthetic_cycles(int class_index, std::size_t channel);

/// Generates one job. `label` is explicit so tests can verify the delayed
/// prefix does not depend on it; the public generator assigns labels itself.
JobRecord synthesize_job(const SyntheticSpec& spec, std::uint64_t seed,
                         std::size_t job_index, int label);

/// Pure function of (spec, seed): identical inputs give a bit-identical
/// dataset, independent of thread count.
LabeledDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

/// Long-format CSV: header `job_id,label,timestamp,<ch...>`, plus a sidecar
/// `<path>.classes` manifest listing class names one per line.
LabeledDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path);

}  // namespace tsalign
