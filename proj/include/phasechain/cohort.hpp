#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phasechain/canonical.hpp"
#include "phasechain/chain.hpp"
#include "phasechain/energy.hpp"
#include "phasechain/geometry.hpp"
#include "phasechain/reduction.hpp"
#include "phasechain/statmech.hpp"
#include "phasechain/stats.hpp"

namespace phasechain {

/// Everything computed for one chain. Stages whose preconditions the chain
/// does not meet are left empty and explained in `flags`.
struct ChainRecord {
  std::string chain_id;
  Label label = Label::unknown;
  std::size_t steps = 0;
  EnergyProfile energy;
  geometry::GeometryProfile geometry;
  bool torsion_from_reduction = false;
  std::size_t frenet_frames = 0;
  std::vector<std::size_t> frenet_degenerate;
  std::vector<Vector> projected;  // steps in PCA coordinates
  canonical::PhaseTrajectory phase;
  double normalized_action = 0.0;
  std::optional<canonical::ConservationReport> conservation;
  StatMechSummary statmech;
  std::optional<Vector> features;
  std::vector<std::string> flags;
};

struct AnalysisOptions {
  double temperature = kDefaultTemperature;
};

enum class Execution { serial, parallel };

/// Per-chain analysis against a fitted model. The parallel path distributes
/// chains over OpenMP threads and collects in input order; both paths give
/// bit-identical records. Module failures surface as StageError naming the
/// chain and stage (lowest failing index wins).
std::vector<ChainRecord> analyze_chains(const ChainDataset& dataset, const PcaModel& model,
                                        const AnalysisOptions& options, Execution execution = Execution::parallel);

/// Single chain, shared by both execution paths.
ChainRecord analyze_chain(const EmbeddedChain& chain, const PcaModel& model, const AnalysisOptions& options);

enum class Granularity { per_chain, per_step };

Granularity parse_granularity(std::string_view text);
std::string_view to_string(Granularity g);

struct GroupComparison {
  double valid_mean = 0.0;
  double invalid_mean = 0.0;
  stats::TTestResult t_test;
  std::optional<double> cohens_d;
};

struct ClassifierSummary {
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  stats::Classifier model;
  stats::ClassificationReport report;  // on the held-out split
};

/// Cohort-level results; each block is empty when its preconditions fail
/// and the reason is appended to `notes`.
struct CohortStatistics {
  std::size_t n_valid = 0;
  std::size_t n_invalid = 0;
  std::size_t n_unknown = 0;
  Granularity granularity = Granularity::per_step;
  std::optional<CohortEnergyStats> energy;
  std::optional<GroupComparison> length;
  std::optional<GroupComparison> smoothness;
  std::vector<std::optional<GroupComparison>> pca_axes;
  std::optional<stats::ManovaResult> manova;
  std::size_t manova_samples = 0;
  std::optional<canonical::ActionAngleCohortTest> action_angle;
  std::optional<GroupComparison> entropy;
  std::optional<GroupComparison> free_energy;
  std::optional<GroupComparison> hamiltonian_se;
  std::optional<GroupComparison> angular_momentum_se;
  std::optional<GroupComparison> energy_like_se;
  std::optional<ClassifierSummary> classifier;
  std::vector<std::string> notes;
};

CohortStatistics cohort_statistics(const std::vector<ChainRecord>& records, Granularity granularity,
                                   std::uint64_t split_salt);

}  // namespace phasechain
