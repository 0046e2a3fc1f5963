#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tsalign/dataset.hpp"
#include "tsalign/errors.hpp"

using namespace tsalign;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "tsalign_dataset_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

void write_manifest(const fs::path& csv_path, const std::vector<std::string>& names) {
  std::ofstream out(csv_path.string() + ".classes");
  REQUIRE(out.good());
  for (const auto& name : names) out << name << '\n';
}

std::string seven_channel_header() {
  return "job_id,label,timestamp,gpu_util,gpu_mem_util,gpu_mem_free,gpu_mem_used,"
         "gpu_temp,gpu_mem_temp,gpu_power\n";
}

std::string seven_channel_rows(const std::string& job_id, const std::string& label,
                               std::size_t length) {
  std::string text;
  for (std::size_t t = 0; t < length; ++t) {
    text += job_id + ',' + label + ',' + std::to_string(t);
    for (std::size_t c = 0; c < 7; ++c) {
      text += ',' + std::to_string(static_cast<double>(t) + 0.1 * static_cast<double>(c));
    }
    text += '\n';
  }
  return text;
}

}  // namespace

TEST_CASE("load_dataset reads a two-job seven-channel file") {
  const auto path = temp_dir() / "two_jobs.csv";
  write_file(path, seven_channel_header() + seven_channel_rows("job_a", "idle", 120) +
                       seven_channel_rows("job_b", "train", 300));
  write_manifest(path, {"idle", "train"});

  const auto dataset = load_dataset(path);
  REQUIRE(dataset.jobs.size() == 2);
  REQUIRE(dataset.num_channels() == 7);
  CHECK(dataset.channels[0].name == "gpu_util");
  CHECK(dataset.channels[6].name == "gpu_power");
  CHECK(dataset.channels[6].index == 6);
  CHECK(dataset.class_names == std::vector<std::string>{"idle", "train"});

  CHECK(dataset.jobs[0].job_id == "job_a");
  CHECK(dataset.jobs[0].label == 0);
  CHECK(dataset.jobs[0].length() == 120);
  CHECK(dataset.jobs[1].job_id == "job_b");
  CHECK(dataset.jobs[1].label == 1);
  CHECK(dataset.jobs[1].length() == 300);
  CHECK(dataset.jobs[1].channels[3][17] == doctest::Approx(17.3).epsilon(1e-12));
}

TEST_CASE("load_dataset rejects a row with a missing channel value") {
  const auto path = temp_dir() / "short_row.csv";
  std::string text = seven_channel_header() + seven_channel_rows("job_a", "idle", 3);
  text += "job_a,idle,3,1.0,2.0,3.0,4.0,5.0,6.0\n";  // 6 of 7 values
  write_file(path, text);
  write_manifest(path, {"idle"});
  CHECK_THROWS_WITH_AS(load_dataset(path), doctest::Contains("channel values"),
                       Error);
  try {
    load_dataset(path);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentChannels);
  }
}

TEST_CASE("save then load reproduces the dataset bit-exactly") {
  LabeledDataset dataset;
  dataset.channels = {{0, "gpu_util"}, {1, "gpu_power"}};
  dataset.class_names = {"idle", "train"};
  JobRecord a;
  a.job_id = "job_00000";
  a.label = 1;
  a.channels = {{0.125, -3.5, 1.0 / 3.0, 6.02214076e23}, {1e-300, 0.0, -0.0, 42.0}};
  JobRecord b;
  b.job_id = "job_00001";
  b.label = 0;
  b.channels = {{5.5}, {-7.25}};
  dataset.jobs = {a, b};

  const auto path = temp_dir() / "round_trip.csv";
  save_dataset(dataset, path);
  CHECK(load_dataset(path) == dataset);
}

TEST_CASE("save_dataset refuses an empty dataset") {
  LabeledDataset dataset;
  dataset.channels = {{0, "ch0"}};
  dataset.class_names = {"only"};
  CHECK_THROWS_AS(save_dataset(dataset, temp_dir() / "empty.csv"), Error);
  try {
    save_dataset(dataset, temp_dir() / "empty.csv");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDataset);
  }
}

TEST_CASE("save_dataset writes a header plus one row per sample") {
  LabeledDataset dataset;
  dataset.channels = {{0, "ch0"}};
  dataset.class_names = {"only"};
  JobRecord job;
  job.job_id = "j";
  job.label = 0;
  job.channels = {{0.0, 1.5}};
  dataset.jobs = {job};

  const auto path = temp_dir() / "tiny.csv";
  save_dataset(dataset, path);

  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "job_id,label,timestamp,ch0");
  CHECK(lines[1] == "j,only,0,0");
  CHECK(lines[2] == "j,only,1,1.5");
}

TEST_CASE("save_dataset regenerates timestamps 0..L-1") {
  LabeledDataset dataset;
  dataset.channels = {{0, "ch0"}};
  dataset.class_names = {"only"};
  JobRecord job;
  job.job_id = "j";
  job.label = 0;
  job.channels = {{7.0, 8.0, 9.0}};
  dataset.jobs = {job};

  const auto path = temp_dir() / "timestamps.csv";
  save_dataset(dataset, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  for (int t = 0; t < 3; ++t) {
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("j,only," + std::to_string(t) + ",", 0) == 0);
  }
}

TEST_CASE("save_dataset rejects names the CSV schema cannot hold") {
  LabeledDataset dataset;
  dataset.channels = {{0, "ch0"}};
  dataset.class_names = {"bad,name"};
  JobRecord job;
  job.job_id = "j";
  job.label = 0;
  job.channels = {{1.0}};
  dataset.jobs = {job};
  try {
    save_dataset(dataset, temp_dir() / "bad_name.csv");
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }

  dataset.class_names = {"ok"};
  dataset.jobs[0].job_id = "j\nj";
  try {
    save_dataset(dataset, temp_dir() / "bad_name.csv");
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
}

TEST_CASE("load_dataset error reporting") {
  const auto check_code = [](const fs::path& path, ErrorCode code) {
    try {
      load_dataset(path);
      FAIL("expected failure for ", path.filename().string());
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };

  SUBCASE("unknown label") {
    const auto path = temp_dir() / "unknown_label.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,mystery,0,1.0\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::UnknownLabel);
  }

  SUBCASE("non-numeric sample") {
    const auto path = temp_dir() / "non_numeric.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,idle,0,oops\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("non-finite sample") {
    const auto path = temp_dir() / "non_finite.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,idle,0,inf\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("timestamps must increase strictly") {
    const auto path = temp_dir() / "bad_timestamps.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,idle,5,1.0\nj,idle,5,2.0\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("negative timestamp") {
    const auto path = temp_dir() / "negative_timestamp.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,idle,-1,1.0\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("label changes mid-job") {
    const auto path = temp_dir() / "label_flip.csv";
    write_file(path,
               "job_id,label,timestamp,ch0\nj,idle,0,1.0\nj,train,1,2.0\n");
    write_manifest(path, {"idle", "train"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("manifest class with no jobs") {
    const auto path = temp_dir() / "orphan_class.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,idle,0,1.0\n");
    write_manifest(path, {"idle", "never_used"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("duplicate manifest names") {
    const auto path = temp_dir() / "dup_manifest.csv";
    write_file(path, "job_id,label,timestamp,ch0\nj,idle,0,1.0\n");
    write_manifest(path, {"idle", "idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("duplicate channel names") {
    const auto path = temp_dir() / "dup_channel.csv";
    write_file(path, "job_id,label,timestamp,ch0,ch0\nj,idle,0,1.0,2.0\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("header only") {
    const auto path = temp_dir() / "header_only.csv";
    write_file(path, "job_id,label,timestamp,ch0\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::EmptyDataset);
  }

  SUBCASE("bad header") {
    const auto path = temp_dir() / "bad_header.csv";
    write_file(path, "id,class,t,ch0\nj,idle,0,1.0\n");
    write_manifest(path, {"idle"});
    check_code(path, ErrorCode::MalformedRow);
  }

  SUBCASE("missing file") {
    check_code(temp_dir() / "does_not_exist.csv", ErrorCode::IoFailure);
  }
}

TEST_CASE("generate_synthetic honors the spec") {
  SyntheticSpec spec;
  spec.num_classes = 5;
  spec.jobs_per_class = 40;
  spec.min_length = 200;
  spec.max_length = 5000;
  spec.channels = 7;
  spec.placement = SignaturePlacement::Uniform;
  spec.noise_std = 0.1;

  const auto dataset = generate_synthetic(spec, 42);
  REQUIRE(dataset.jobs.size() == 200);
  REQUIRE(dataset.num_channels() == 7);
  REQUIRE(dataset.num_classes() == 5);
  CHECK(dataset.channels[0].name == "gpu_util");
  CHECK(dataset.class_names[4] == "class_4");

  std::vector<std::size_t> per_class(5, 0);
  for (const auto& job : dataset.jobs) {
    CHECK(job.length() >= 200);
    CHECK(job.length() <= 5000);
    REQUIRE(job.channels.size() == 7);
    for (const auto& channel : job.channels) REQUIRE(channel.size() == job.length());
    REQUIRE(job.label >= 0);
    REQUIRE(job.label < 5);
    ++per_class[static_cast<std::size_t>(job.label)];
  }
  for (std::size_t k = 0; k < 5; ++k) CHECK(per_class[k] == 40);
}

TEST_CASE("generate_synthetic is deterministic") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.jobs_per_class = 6;
  spec.min_length = 50;
  spec.max_length = 400;
  spec.channels = 2;
  spec.noise_std = 0.0;

  CHECK(generate_synthetic(spec, 7) == generate_synthetic(spec, 7));

  spec.noise_std = 0.25;
  CHECK(generate_synthetic(spec, 7) == generate_synthetic(spec, 7));
}

#ifdef _OPENMP
TEST_CASE("generate_synthetic is independent of thread count") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.jobs_per_class = 8;
  spec.min_length = 64;
  spec.max_length = 512;
  spec.channels = 3;
  spec.noise_std = 0.05;

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto serial = generate_synthetic(spec, 99);
  omp_set_num_threads(4);
  const auto parallel = generate_synthetic(spec, 99);
  omp_set_num_threads(saved);
  CHECK(serial == parallel);
}
#endif

TEST_CASE("noise-free uniform jobs average to the class offset") {
  SyntheticSpec spec;
  spec.num_classes = 4;
  spec.jobs_per_class = 3;
  spec.min_length = 300;
  spec.max_length = 2000;
  spec.channels = 3;
  spec.placement = SignaturePlacement::Uniform;
  spec.noise_std = 0.0;

  const auto dataset = generate_synthetic(spec, 11);
  for (const auto& job : dataset.jobs) {
    for (std::size_t c = 0; c < spec.channels; ++c) {
      double sum = 0.0;
      for (double v : job.channels[c]) sum += v;
      const double mean = sum / static_cast<double>(job.length());
      CHECK(std::abs(mean - synthetic_offset(job.label, c)) < 1e-9);
    }
  }
}

TEST_CASE("noise-free uniform samples match the closed-form signature") {
  SyntheticSpec spec;
  spec.num_classes = 2;
  spec.jobs_per_class = 2;
  spec.min_length = 128;
  spec.max_length = 256;
  spec.channels = 2;
  spec.placement = SignaturePlacement::Uniform;
  spec.noise_std = 0.0;

  const auto dataset = generate_synthetic(spec, 3);
  for (const auto& job : dataset.jobs) {
    const auto length = static_cast<double>(job.length());
    for (std::size_t c = 0; c < spec.channels; ++c) {
      const double offset = synthetic_offset(job.label, c);
      const auto cycles = static_cast<double>(synthetic_cycles(job.label, c));
      for (std::size_t t = 0; t < job.length(); ++t) {
        const double expected =
            offset + std::sin(2.0 * std::numbers::pi * cycles * static_cast<double>(t) / length);
        CHECK(std::abs(job.channels[c][t] - expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("delayed placement keeps the prefix label-independent") {
  SyntheticSpec spec;
  spec.num_classes = 5;
  spec.jobs_per_class = 1;
  spec.min_length = 2500;
  spec.max_length = 4000;
  spec.channels = 3;
  spec.placement = SignaturePlacement::Delayed;
  spec.noise_std = 0.1;

  for (std::size_t index = 0; index < 4; ++index) {
    const auto base = synthesize_job(spec, 42, index, 0);
    for (int label = 1; label < 5; ++label) {
      const auto other = synthesize_job(spec, 42, index, label);
      REQUIRE(other.length() == base.length());
      const std::size_t prefix = std::min(base.length(), kDelayedSignatureStart);
      bool prefix_identical = true;
      bool tail_differs = false;
      for (std::size_t c = 0; c < spec.channels; ++c) {
        for (std::size_t t = 0; t < prefix; ++t) {
          if (base.channels[c][t] != other.channels[c][t]) prefix_identical = false;
        }
        for (std::size_t t = prefix; t < base.length(); ++t) {
          if (base.channels[c][t] != other.channels[c][t]) tail_differs = true;
        }
      }
      CHECK(prefix_identical);
      CHECK(tail_differs);
    }
  }
}

TEST_CASE("generate_synthetic validates its spec") {
  const auto check_invalid = [](const SyntheticSpec& spec) {
    try {
      generate_synthetic(spec, 0);
      FAIL("expected InvalidSpec");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSpec);
    }
  };

  SyntheticSpec spec;
  spec.num_classes = 0;
  check_invalid(spec);

  spec = {};
  spec.jobs_per_class = 0;
  check_invalid(spec);

  spec = {};
  spec.channels = 0;
  check_invalid(spec);

  spec = {};
  spec.min_length = 0;
  check_invalid(spec);

  spec = {};
  spec.min_length = 10;
  spec.max_length = 9;
  check_invalid(spec);

  spec = {};
  spec.noise_std = -0.5;
  check_invalid(spec);
}
