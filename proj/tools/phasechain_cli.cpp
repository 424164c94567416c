// phasechain: Hamiltonian and geometric diagnostics for embedded reasoning
// chains. Exit codes: 0 success, 1 I/O error, 2 validation error,
// 3 internal numerical failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasechain/chain.hpp"
#include "phasechain/error.hpp"
#include "phasechain/pipeline.hpp"
#include "phasechain/plot.hpp"
#include "phasechain/report.hpp"

namespace {

int run(int argc, char** argv) {
  using namespace phasechain;

  CLI::App app{"Hamiltonian trajectory analysis of embedded reasoning chains"};
  app.require_subcommand(1);

  RunConfig config;
  std::string granularity = "per-step";
  bool serial = false;
  auto* analyze = app.add_subcommand("analyze", "Run the full analysis and write report.json plus CSV exports");
  analyze->add_option("--input", config.input, "JSONL chain file")->required();
  analyze->add_option("--out", config.output_dir, "Output directory")->required();
  analyze->add_option("--pca-k", config.pca_k, "PCA target dimension (2 or 3)")->capture_default_str();
  analyze->add_option("--temperature", config.temperature, "Free-energy temperature (> 0)")->capture_default_str();
  analyze->add_option("--granularity", granularity, "MANOVA / PCA-axis samples: per-step or per-chain")
      ->capture_default_str();
  analyze->add_option("--seed", config.seed, "Salt for the train/test split")->capture_default_str();
  analyze->add_flag("--plot", config.plot, "Also write SVG plots");
  analyze->add_flag("--serial", serial, "Use the single-threaded reference path");

  std::string report_path;
  std::vector<std::string> kinds;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render SVG plots from a report.json");
  plot_cmd->add_option("--report", report_path, "Path to report.json")->required();
  plot_cmd->add_option("--kinds", kinds, "energy-hist phase-2d pca-3d conservation-hist entropy-hist")->required();
  plot_cmd->add_option("--out", plot_out, "Output directory (defaults to the report's directory)");

  std::size_t max_n = 1024;
  std::size_t repeats = 3;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Fit the empirical complexity exponent of the analysis");
  bench->add_option("--max-n", max_n, "Largest cohort size (>= 8)")->capture_default_str();
  bench->add_option("--repeats", repeats, "Timed repeats per size; the minimum is kept")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Synthetic cohort seed")->capture_default_str();

  SynthParams synth_params;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic labelled cohort as JSONL");
  synth->add_option("--valid", synth_params.n_valid, "Number of valid chains")->capture_default_str();
  synth->add_option("--invalid", synth_params.n_invalid, "Number of invalid chains")->capture_default_str();
  synth->add_option("--dim", synth_params.dimension, "Embedding dimension")->capture_default_str();
  synth->add_option("--steps", synth_params.steps, "Steps per chain")->capture_default_str();
  synth->add_option("--seed", synth_params.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output JSONL path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*analyze) {
    config.granularity = parse_granularity(granularity);
    config.execution = serial ? Execution::serial : Execution::parallel;
    const auto report = run_analyze(config);
    std::cout << "analyzed " << report.chains.size() << " chains -> " << (config.output_dir / "report.json").string()
              << '\n';
    for (const auto& note : report.statistics.notes) std::cerr << "note: " << note << '\n';
  } else if (*plot_cmd) {
    std::vector<plot::PlotKind> parsed;
    for (const auto& k : kinds) parsed.push_back(plot::parse_kind(k));
    const std::filesystem::path dir =
        plot_out.empty() ? std::filesystem::path(report_path).parent_path() : std::filesystem::path(plot_out);
    for (const auto& p : plot::write_plots(load_report(report_path), parsed, dir.empty() ? "." : dir)) {
      std::cout << p.string() << '\n';
    }
  } else if (*bench) {
    const auto result = run_bench(max_n, repeats, bench_seed);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::printf("%10s %14s\n", "chains", "seconds");
    for (const auto& p : result.points) std::printf("%10zu %14.6f\n", p.chains, p.seconds);
    std::printf("estimated complexity: O(n^%.2f)\n", result.exponent);
  } else if (*synth) {
    write_dataset(synth_dataset(synth_params), std::filesystem::path(synth_out));
    std::cout << "wrote " << synth_params.n_valid + synth_params.n_invalid << " chains to " << synth_out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const phasechain::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const phasechain::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const phasechain::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
