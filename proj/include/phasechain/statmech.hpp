#pragma once

#include <span>
#include <string>

#include "phasechain/chain.hpp"
#include "phasechain/energy.hpp"

namespace phasechain {

inline constexpr double kDefaultTemperature = 1.0;

struct StatMechSummary {
  std::string chain_id;
  double entropy = 0.0;  // nats, in [0, ln(m - 1)]
  double free_energy = 0.0;
  double temperature = kDefaultTemperature;
};

/// Shannon entropy (nats) of the step magnitudes normalized to sum to one.
/// Zero when every momentum is zero.
double trajectory_entropy(std::span<const Vector> points);
inline double trajectory_entropy(const EmbeddedChain& chain) { return trajectory_entropy(chain.steps); }

/// mean_i (T_i + |V_i|) - temperature * entropy.
double free_energy(const EnergyProfile& energy, double entropy, double temperature);
double free_energy(const EmbeddedChain& chain, double temperature = kDefaultTemperature);

StatMechSummary statmech_summary(const EmbeddedChain& chain, const EnergyProfile& energy,
                                 double temperature = kDefaultTemperature);

}  // namespace phasechain
