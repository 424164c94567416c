#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasechain/chain.hpp"
#include "phasechain/stats.hpp"

namespace phasechain {

/// Per-transition energies of one chain. Entry i describes the move from
/// step i to step i + 1: momentum p_i, kinetic T_i = |p_i|^2 / 2, potential
/// V_i = -cos(q_i, reference) at the starting state, and H_i = T_i - V_i.
struct EnergyProfile {
  std::string chain_id;
  std::vector<Vector> momenta;
  std::vector<double> kinetic;
  std::vector<double> potential;
  std::vector<double> hamiltonian;
  double mean_h = 0.0;
  double conservation_score = 0.0;
};

/// p_i = q_{i+1} - q_i for a sequence of states.
std::vector<Vector> momentum_sequence(std::span<const Vector> states);
inline std::vector<Vector> momentum_sequence(const EmbeddedChain& chain) { return momentum_sequence(chain.steps); }

double kinetic_energy(const Vector& momentum);

/// -cos(q, reference), clamped to [-1, 1]. A zero state has similarity 0.
double potential_energy(const Vector& state, const Vector& reference);

EnergyProfile energy_profile(const EmbeddedChain& chain);

/// Population standard deviation of H divided by (1 + |mean H|).
double conservation_score(std::span<const double> hamiltonian);

struct CohortEnergyStats {
  std::size_t n_valid = 0;
  std::size_t n_invalid = 0;
  double valid_mean_h = 0.0;
  double valid_std_h = 0.0;
  double invalid_mean_h = 0.0;
  double invalid_std_h = 0.0;
  double valid_mean_score = 0.0;
  double invalid_mean_score = 0.0;
  stats::TTestResult t_test;  // valid vs invalid mean_h
  /// Pearson correlation of conservation score with validity (valid = 1);
  /// empty when the scores have no spread.
  std::optional<double> score_validity_correlation;
};

/// Groups by label (unknown chains are ignored). Needs >= 2 chains per group.
CohortEnergyStats cohort_energy_stats(std::span<const EnergyProfile> profiles, std::span<const Label> labels);
CohortEnergyStats cohort_energy_stats(const ChainDataset& dataset);

}  // namespace phasechain
