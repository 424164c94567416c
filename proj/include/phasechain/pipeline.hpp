#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phasechain/chain.hpp"
#include "phasechain/cohort.hpp"
#include "phasechain/reduction.hpp"

namespace phasechain {

inline constexpr const char* kToolName = "phasechain";
inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path output_dir;
  int pca_k = 3;
  double temperature = kDefaultTemperature;
  std::uint64_t seed = 0;  // salts the train/test split only
  Granularity granularity = Granularity::per_step;
  bool plot = false;
  Execution execution = Execution::parallel;

  /// Throws ValidationError unless pca_k is 2 or 3 and temperature > 0.
  void validate() const;
};

struct Provenance {
  std::string input;
  std::string input_sha256;
  std::string dataset_note;
  std::size_t chain_count = 0;
  Eigen::Index dimension = 0;
};

struct CohortReport {
  RunConfig config;
  Provenance provenance;
  PcaModel model;
  std::vector<ChainRecord> chains;
  CohortStatistics statistics;
  std::string generated_at;  // the only field allowed to differ between reruns
};

/// Fit, per-chain analysis and cohort statistics on an in-memory dataset.
/// Throws ValidationError("empty cohort") on an empty dataset.
CohortReport analyze_dataset(const ChainDataset& dataset, const RunConfig& config);

/// Loads config.input, analyzes it and writes report.json plus CSV exports
/// (and SVG plots when config.plot) into config.output_dir.
CohortReport run_analyze(const RunConfig& config);

std::string sha256_hex(const std::filesystem::path& path);
std::string utc_timestamp();

struct BenchPoint {
  std::size_t chains = 0;
  double seconds = 0.0;  // min over repeats
};

struct BenchResult {
  std::vector<BenchPoint> points;
  double exponent = 0.0;
  std::vector<std::string> warnings;
};

/// Geometric sizes up to max_n (halving, at most 8 sizes, at least 3),
/// timing analyze_dataset on synthetic cohorts. Sizes are scaled up when the
/// smallest run is below timer resolution.
BenchResult run_bench(std::size_t max_n, std::size_t repeats, std::uint64_t seed = 1);

}  // namespace phasechain
