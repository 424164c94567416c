#include "phasechain/energy.hpp"

#include <algorithm>
#include <cmath>

#include "phasechain/error.hpp"

namespace phasechain {

std::vector<Vector> momentum_sequence(std::span<const Vector> states) {
  std::vector<Vector> momenta;
  if (states.size() < 2) return momenta;
  momenta.reserve(states.size() - 1);
  for (std::size_t i = 0; i + 1 < states.size(); ++i) momenta.push_back(states[i + 1] - states[i]);
  return momenta;
}

double kinetic_energy(const Vector& momentum) { return 0.5 * momentum.squaredNorm(); }

double potential_energy(const Vector& state, const Vector& reference) {
  const double ref_norm = reference.norm();
  if (!(ref_norm > 0.0)) throw ValidationError("potential energy: reference vector has zero norm");
  const double state_norm = state.norm();
  if (state_norm == 0.0) return 0.0;
  const double cosine = state.dot(reference) / (state_norm * ref_norm);
  return -std::clamp(cosine, -1.0, 1.0);
}

double conservation_score(std::span<const double> hamiltonian) {
  if (hamiltonian.empty()) throw ValidationError("conservation score of an empty Hamiltonian series");
  if (hamiltonian.size() == 1) return 0.0;
  return stats::stddev(hamiltonian, 0) / (1.0 + std::fabs(stats::mean(hamiltonian)));
}

EnergyProfile energy_profile(const EmbeddedChain& chain) {
  if (chain.steps.size() < 2) throw ValidationError("chain '" + chain.id + "': energy needs at least 2 steps");
  EnergyProfile profile;
  profile.chain_id = chain.id;
  profile.momenta = momentum_sequence(chain);
  const std::size_t n = profile.momenta.size();
  profile.kinetic.resize(n);
  profile.potential.resize(n);
  profile.hamiltonian.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    profile.kinetic[i] = kinetic_energy(profile.momenta[i]);
    profile.potential[i] = potential_energy(chain.steps[i], chain.reference);
    profile.hamiltonian[i] = profile.kinetic[i] - profile.potential[i];
  }
  profile.mean_h = stats::mean(profile.hamiltonian);
  profile.conservation_score = conservation_score(profile.hamiltonian);
  return profile;
}

CohortEnergyStats cohort_energy_stats(std::span<const EnergyProfile> profiles, std::span<const Label> labels) {
  if (profiles.size() != labels.size()) throw ValidationError("cohort energy stats: one label per profile");
  std::vector<double> valid_h, invalid_h, valid_s, invalid_s, scores, validity;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (labels[i] == Label::unknown) continue;
    const bool valid = labels[i] == Label::valid;
    (valid ? valid_h : invalid_h).push_back(profiles[i].mean_h);
    (valid ? valid_s : invalid_s).push_back(profiles[i].conservation_score);
    scores.push_back(profiles[i].conservation_score);
    validity.push_back(valid ? 1.0 : 0.0);
  }
  if (valid_h.size() < 2 || invalid_h.size() < 2) {
    throw ValidationError("cohort energy stats need at least 2 valid and 2 invalid chains");
  }
  CohortEnergyStats s;
  s.n_valid = valid_h.size();
  s.n_invalid = invalid_h.size();
  s.valid_mean_h = stats::mean(valid_h);
  s.valid_std_h = stats::stddev(valid_h);
  s.invalid_mean_h = stats::mean(invalid_h);
  s.invalid_std_h = stats::stddev(invalid_h);
  s.valid_mean_score = stats::mean(valid_s);
  s.invalid_mean_score = stats::mean(invalid_s);
  s.t_test = stats::welch_t_test(valid_h, invalid_h);
  if (stats::variance(scores, 0) > 0.0) s.score_validity_correlation = stats::pearson_correlation(scores, validity);
  return s;
}

CohortEnergyStats cohort_energy_stats(const ChainDataset& dataset) {
  std::vector<EnergyProfile> profiles;
  std::vector<Label> labels;
  profiles.reserve(dataset.chains.size());
  for (const auto& chain : dataset.chains) {
    profiles.push_back(energy_profile(chain));
    labels.push_back(chain.label);
  }
  return cohort_energy_stats(profiles, labels);
}

}  // namespace phasechain
