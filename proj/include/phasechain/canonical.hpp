#pragma once

#include <span>
#include <string>
#include <vector>

#include "phasechain/chain.hpp"
#include "phasechain/reduction.hpp"
#include "phasechain/stats.hpp"

namespace phasechain::canonical {

struct PhasePoint {
  Vector q;  // reduced state
  Vector p;  // reduced momentum, q_{i+1} - q_i
};

/// Reduced (q, p) trajectory plus the action-angle image of its leading
/// coordinate pair: I = (q0^2 + p0^2) / 2, theta = atan2(p0, q0).
struct PhaseTrajectory {
  std::string chain_id;
  std::vector<PhasePoint> points;
  std::vector<double> actions;
  std::vector<double> angles;            // wrapped to (-pi, pi]
  std::vector<double> unwrapped_angles;  // consecutive jumps never exceed pi
  double mean_action = 0.0;
  double angle_range = 0.0;  // max - min of the unwrapped angles
};

/// Action-angle map over precomputed phase points.
PhaseTrajectory action_angle(std::string chain_id, std::vector<PhasePoint> points);

/// q_i is step i projected on the leading k axes, p_i = q_{i+1} - q_i.
PhaseTrajectory phase_trajectory(const PcaModel& model, const EmbeddedChain& chain, Eigen::Index k);

/// Shifts each angle by a multiple of 2 pi so no consecutive jump exceeds pi.
std::vector<double> unwrap_angles(std::span<const double> angles);

/// Mean action divided by the chain's mean squared embedding component, a
/// scale-free companion to the raw action.
double rms_normalized_action(const PhaseTrajectory& phase, const EmbeddedChain& chain);

struct ActionAngleCohortTest {
  std::size_t n_valid = 0;
  std::size_t n_invalid = 0;
  double valid_mean_action = 0.0;
  double invalid_mean_action = 0.0;
  double valid_mean_angle_range = 0.0;
  double invalid_mean_angle_range = 0.0;
  stats::TTestResult action_test;       // valid vs invalid mean_action
  stats::TTestResult angle_range_test;  // valid vs invalid angle_range
};

ActionAngleCohortTest action_angle_cohort_test(std::span<const PhaseTrajectory> phases,
                                               std::span<const Label> labels);
ActionAngleCohortTest action_angle_cohort_test(const ChainDataset& dataset, const PcaModel& model);

/// Standard errors (sample std / sqrt(n)) of three stepwise series.
struct ConservationReport {
  std::string chain_id;
  double hamiltonian_se = 0.0;       // native H_i
  double angular_momentum_se = 0.0;  // L_i = q0 p1 - q1 p0 in 2-D reduction
  double energy_like_se = 0.0;       // E_i = |p_i|^2 / 2 + |q_i|^2 / 2, reduced
};

/// Works from an already computed Hamiltonian series and 2-D (or wider)
/// phase points of equal length.
ConservationReport conservation_from_series(std::string chain_id, std::span<const double> hamiltonian,
                                            std::span<const PhasePoint> points);

/// Needs a model with at least 2 components and a chain with m >= 3.
ConservationReport conservation_report(const PcaModel& model, const EmbeddedChain& chain);

}  // namespace phasechain::canonical
