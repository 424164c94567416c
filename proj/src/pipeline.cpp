#include "phasechain/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "phasechain/error.hpp"
#include "phasechain/plot.hpp"
#include "phasechain/report.hpp"
#include "phasechain/stats.hpp"

namespace phasechain {

void RunConfig::validate() const {
  if (pca_k != 2 && pca_k != 3) throw ValidationError("--pca-k must be 2 or 3");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("--temperature must be a positive finite number");
  }
}

CohortReport analyze_dataset(const ChainDataset& dataset, const RunConfig& config) {
  config.validate();
  if (dataset.empty()) throw ValidationError("empty cohort");
  if (*dataset.dimension < config.pca_k) {
    throw ValidationError("embedding dimension " + std::to_string(*dataset.dimension) + " is below --pca-k " +
                          std::to_string(config.pca_k));
  }
  CohortReport report;
  report.config = config;
  report.provenance.dataset_note = dataset.provenance;
  report.provenance.chain_count = dataset.chains.size();
  report.provenance.dimension = *dataset.dimension;
  report.model = fit_pca(dataset, config.pca_k);
  report.chains = analyze_chains(dataset, report.model, {config.temperature}, config.execution);
  report.statistics = cohort_statistics(report.chains, config.granularity, config.seed);
  return report;
}

std::string sha256_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("SHA-256 unavailable");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("read error on '" + path.string() + "'");
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CohortReport run_analyze(const RunConfig& config) {
  config.validate();
  const ChainDataset dataset = load_dataset(config.input);
  CohortReport report = analyze_dataset(dataset, config);
  report.provenance.input = config.input.string();
  report.provenance.input_sha256 = sha256_hex(config.input);
  report.generated_at = utc_timestamp();
  write_report_files(report, config.output_dir);
  if (config.plot) {
    std::vector<plot::PlotKind> kinds = {plot::PlotKind::energy_hist, plot::PlotKind::phase_2d,
                                         plot::PlotKind::conservation_hist, plot::PlotKind::entropy_hist};
    if (config.pca_k == 3) kinds.push_back(plot::PlotKind::pca_3d);
    plot::write_plots(report_to_json(report), kinds, config.output_dir);
  }
  return report;
}

BenchResult run_bench(std::size_t max_n, std::size_t repeats, std::uint64_t seed) {
  if (max_n < 8) throw ValidationError("--max-n must be at least 8");
  if (repeats < 1) throw ValidationError("--repeats must be at least 1");
  constexpr double kMinMeasurableSeconds = 1e-3;
  constexpr int kMaxEnlargements = 6;

  std::vector<std::size_t> sizes;
  for (std::size_t n = max_n; n >= 2 && sizes.size() < 8; n /= 2) sizes.push_back(n);
  std::reverse(sizes.begin(), sizes.end());

  BenchResult result;
  RunConfig config;
  for (int attempt = 0;; ++attempt) {
    result.points.clear();
    for (std::size_t n : sizes) {
      SynthParams params;
      params.n_valid = n / 2;
      params.n_invalid = n - n / 2;
      params.seed = seed;
      const ChainDataset dataset = synth_dataset(params);
      double best = INFINITY;
      for (std::size_t r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto report = analyze_dataset(dataset, config);
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
      }
      result.points.push_back({n, best});
    }
    if (result.points.front().seconds >= kMinMeasurableSeconds || attempt == kMaxEnlargements) break;
    result.warnings.push_back("smallest size (" + std::to_string(sizes.front()) + " chains) ran below " +
                              "timer resolution; enlarging all sizes x4");
    for (auto& n : sizes) n *= 4;
  }
  std::vector<double> xs, ys;
  for (const auto& p : result.points) {
    xs.push_back(static_cast<double>(p.chains));
    ys.push_back(std::max(p.seconds, 1e-9));
  }
  result.exponent = stats::complexity_fit(xs, ys);
  return result;
}

}  // namespace phasechain
