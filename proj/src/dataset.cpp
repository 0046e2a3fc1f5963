#include "tsalign/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "tsalign/errors.hpp"
#include "tsalign/io_util.hpp"
#include "tsalign/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsalign {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

const char* const kGpuSensorNames[7] = {
    "gpu_util",     "gpu_mem_util", "gpu_mem_free", "gpu_mem_used",
    "gpu_temp",     "gpu_mem_temp", "gpu_power",
};

std::vector<ChannelId> default_channel_table(std::size_t count) {
  std::vector<ChannelId> table(count);
  for (std::size_t c = 0; c < count; ++c) {
    table[c].index = c;
    table[c].name = count == 7 ? kGpuSensorNames[c] : "ch" + std::to_string(c);
  }
  return table;
}

void validate_spec(const SyntheticSpec& spec) {
  if (spec.num_classes < 1 || spec.jobs_per_class < 1 || spec.channels < 1) {
    throw Error(ErrorCode::InvalidSpec, "classes, jobs per class, and channels must be >= 1");
  }
  if (spec.min_length < 1 || spec.min_length > spec.max_length) {
    throw Error(ErrorCode::InvalidSpec, "need 1 <= min_length <= max_length");
  }
  if (!(spec.noise_std >= 0.0) || !std::isfinite(spec.noise_std)) {
    throw Error(ErrorCode::InvalidSpec, "noise_std must be finite and >= 0");
  }
}

void check_writable_name(const std::string& name, const char* what) {
  if (name.empty() || name.find(',') != std::string::npos ||
      name.find('\n') != std::string::npos || name.find('\r') != std::string::npos) {
    throw Error(ErrorCode::IoFailure,
                std::string(what) + " '" + name + "' cannot be stored in CSV");
  }
}

void validate_dataset(const LabeledDataset& dataset, const std::string& origin) {
  std::vector<std::size_t> class_counts(dataset.class_names.size(), 0);
  for (const auto& job : dataset.jobs) {
    if (job.label < 0 || static_cast<std::size_t>(job.label) >= dataset.class_names.size()) {
      throw Error(ErrorCode::UnknownLabel,
                  "job '" + job.job_id + "' label out of range in " + origin);
    }
    ++class_counts[static_cast<std::size_t>(job.label)];
  }
  for (std::size_t k = 0; k < class_counts.size(); ++k) {
    if (class_counts[k] == 0) {
      throw Error(ErrorCode::MalformedRow,
                  "manifest class '" + dataset.class_names[k] + "' has no jobs in " + origin);
    }
  }
}

std::vector<std::string> load_class_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open class manifest " + path.string());
  }
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto sv = strip_cr(line);
    if (sv.empty()) continue;
    names.emplace_back(sv);
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) {
        throw Error(ErrorCode::MalformedRow,
                    "duplicate class name '" + names[i] + "' in manifest");
      }
    }
  }
  return names;
}

}  // namespace

double synthetic_offset(int class_index, std::size_t channel) {
  return 0.6 * (class_index + 1) + 0.15 * static_cast<double>(channel);
}

std::size_t synthetic_cycles(int class_index, std::size_t channel) {
  return 2 + static_cast<std::size_t>(class_index) + 3 * channel;
}

JobRecord synthesize_job(const SyntheticSpec& spec, std::uint64_t seed,
                         std::size_t job_index, int label) {
  rng::Stream stream(rng::derive(seed, "synthetic-job", job_index));
  const std::size_t span = spec.max_length - spec.min_length + 1;
  const std::size_t length = spec.min_length + stream.next_below(span);

  char id_buf[32];
  std::snprintf(id_buf, sizeof(id_buf), "job_%05zu", job_index);

  JobRecord job;
  job.job_id = id_buf;
  job.label = label;
  job.channels.assign(spec.channels, std::vector<double>(length, 0.0));

  // Signature region: whole series for uniform placement, the tail past the
  // fixed delay for delayed placement. The noise stream is consumed in the
  // same (channel, sample) order no matter the label, so delayed prefixes are
  // label-independent sample for sample.
  const std::size_t sig_start =
      spec.placement == SignaturePlacement::Uniform
          ? 0
          : std::min(kDelayedSignatureStart, length);
  const std::size_t sig_len = length - sig_start;

  for (std::size_t c = 0; c < spec.channels; ++c) {
    const double offset = synthetic_offset(label, c);
    const double cycles = static_cast<double>(synthetic_cycles(label, c));
    auto& samples = job.channels[c];
    for (std::size_t t = 0; t < length; ++t) {
      double value = spec.noise_std > 0.0 ? spec.noise_std * stream.next_gaussian() : 0.0;
      if (t >= sig_start && sig_len > 0) {
        const double phase = static_cast<double>(t - sig_start) / static_cast<double>(sig_len);
        value += offset + std::sin(kTau * cycles * phase);
      }
      samples[t] = value;
    }
  }
  return job;
}

LabeledDataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate_spec(spec);

  LabeledDataset dataset;
  dataset.channels = default_channel_table(spec.channels);
  for (std::size_t k = 0; k < spec.num_classes; ++k) {
    dataset.class_names.push_back("class_" + std::to_string(k));
  }

  const std::size_t total = spec.num_classes * spec.jobs_per_class;
  dataset.jobs.resize(total);
#pragma omp parallel for schedule(dynamic)
  for (long long j = 0; j < static_cast<long long>(total); ++j) {
    const auto index = static_cast<std::size_t>(j);
    const int label = static_cast<int>(index % spec.num_classes);
    dataset.jobs[index] = synthesize_job(spec, seed, index, label);
  }
  return dataset;
}

LabeledDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoFailure, "cannot open dataset " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::EmptyDataset, "no header row in " + path.string());
  }
  const auto header = split_fields(strip_cr(line));
  if (header.size() < 4 || header[0] != "job_id" || header[1] != "label" ||
      header[2] != "timestamp") {
    throw Error(ErrorCode::MalformedRow,
                "expected header job_id,label,timestamp,<channels...> in " + path.string());
  }

  LabeledDataset dataset;
  const std::size_t num_channels = header.size() - 3;
  for (std::size_t c = 0; c < num_channels; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      if (header[prev + 3] == header[c + 3]) {
        throw Error(ErrorCode::MalformedRow,
                    "duplicate channel name '" + std::string(header[c + 3]) + "'");
      }
    }
    dataset.channels.push_back({c, std::string(header[c + 3])});
  }

  dataset.class_names = load_class_manifest(path.string() + ".classes");
  std::unordered_map<std::string, int> class_index;
  for (std::size_t k = 0; k < dataset.class_names.size(); ++k) {
    class_index[dataset.class_names[k]] = static_cast<int>(k);
  }

  std::unordered_map<std::string, std::size_t> job_slot;
  std::vector<std::int64_t> last_timestamp;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto sv = strip_cr(line);
    if (sv.empty()) continue;
    const auto fields = split_fields(sv);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() < 3) {
      throw Error(ErrorCode::MalformedRow, where + ": too few fields");
    }
    if (fields.size() != num_channels + 3) {
      throw Error(ErrorCode::InconsistentChannels,
                  where + ": job '" + std::string(fields[0]) + "' has " +
                      std::to_string(fields.size() - 3) + " channel values, expected " +
                      std::to_string(num_channels));
    }

    const std::string job_id(fields[0]);
    if (job_id.empty()) {
      throw Error(ErrorCode::MalformedRow, where + ": empty job_id");
    }
    const auto label_it = class_index.find(std::string(fields[1]));
    if (label_it == class_index.end()) {
      throw Error(ErrorCode::UnknownLabel,
                  where + ": label '" + std::string(fields[1]) + "' not in manifest");
    }
    std::int64_t timestamp = 0;
    if (!parse_i64(fields[2], timestamp) || timestamp < 0) {
      throw Error(ErrorCode::MalformedRow, where + ": bad timestamp");
    }

    auto [slot_it, inserted] = job_slot.try_emplace(job_id, dataset.jobs.size());
    if (inserted) {
      JobRecord job;
      job.job_id = job_id;
      job.label = label_it->second;
      job.channels.assign(num_channels, {});
      dataset.jobs.push_back(std::move(job));
      last_timestamp.push_back(-1);
    }
    JobRecord& job = dataset.jobs[slot_it->second];
    if (job.label != label_it->second) {
      throw Error(ErrorCode::MalformedRow,
                  where + ": job '" + job_id + "' changes label mid-file");
    }
    if (timestamp <= last_timestamp[slot_it->second]) {
      throw Error(ErrorCode::MalformedRow,
                  where + ": timestamps not strictly increasing for job '" + job_id + "'");
    }
    last_timestamp[slot_it->second] = timestamp;

    for (std::size_t c = 0; c < num_channels; ++c) {
      double value = 0.0;
      if (!parse_double(fields[c + 3], value) || !std::isfinite(value)) {
        throw Error(ErrorCode::MalformedRow,
                    where + ": non-numeric sample in channel '" +
                        dataset.channels[c].name + "'");
      }
      job.channels[c].push_back(value);
    }
  }

  if (dataset.jobs.empty()) {
    throw Error(ErrorCode::EmptyDataset, "no data rows in " + path.string());
  }
  validate_dataset(dataset, path.string());
  return dataset;
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
  if (dataset.jobs.empty()) {
    throw Error(ErrorCode::EmptyDataset, "refusing to write dataset with no jobs");
  }
  if (dataset.channels.empty()) {
    throw Error(ErrorCode::EmptyDataset, "refusing to write dataset with no channels");
  }
  validate_dataset(dataset, "in-memory dataset");
  for (const auto& name : dataset.class_names) check_writable_name(name, "class name");
  for (const auto& channel : dataset.channels) check_writable_name(channel.name, "channel name");

  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  }
  out << "job_id,label,timestamp";
  for (const auto& channel : dataset.channels) out << ',' << channel.name;
  out << '\n';
  for (const auto& job : dataset.jobs) {
    check_writable_name(job.job_id, "job id");
    if (job.channels.size() != dataset.channels.size()) {
      throw Error(ErrorCode::InconsistentChannels,
                  "job '" + job.job_id + "' has wrong channel count");
    }
    const std::size_t length = job.length();
    if (length == 0) {
      throw Error(ErrorCode::InconsistentChannels, "job '" + job.job_id + "' has no samples");
    }
    for (const auto& channel : job.channels) {
      if (channel.size() != length) {
        throw Error(ErrorCode::InconsistentChannels,
                    "job '" + job.job_id + "' has ragged channel lengths");
      }
    }
    const std::string& label_name = dataset.class_names[static_cast<std::size_t>(job.label)];
    for (std::size_t t = 0; t < length; ++t) {
      out << job.job_id << ',' << label_name << ',' << t;
      for (const auto& channel : job.channels) {
        out << ',' << format_double(channel[t]);
      }
      out << '\n';
    }
  }
  if (!out) {
    throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
  }

  const std::filesystem::path manifest = path.string() + ".classes";
  std::ofstream manifest_out(manifest);
  if (!manifest_out) {
    throw Error(ErrorCode::IoFailure, "cannot open " + manifest.string() + " for writing");
  }
  for (const auto& name : dataset.class_names) manifest_out << name << '\n';
  if (!manifest_out) {
    throw Error(ErrorCode::IoFailure, "write failed for " + manifest.string());
  }
}

}  // namespace tsalign
