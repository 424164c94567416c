#include "phasechain/statmech.hpp"

#include <algorithm>
#include <cmath>

#include "phasechain/error.hpp"
#include "phasechain/geometry.hpp"

namespace phasechain {

double trajectory_entropy(std::span<const Vector> points) {
  if (points.size() < 2) throw ValidationError("entropy needs at least 2 points");
  const auto magnitudes = geometry::step_magnitudes(points);
  double total = 0.0;
  for (double v : magnitudes) total += v;
  if (!(total > 0.0)) return 0.0;
  double entropy = 0.0;
  for (double v : magnitudes) {
    if (v > 0.0) {
      const double w = v / total;
      entropy -= w * std::log(w);
    }
  }
  return std::max(entropy, 0.0);
}

double free_energy(const EnergyProfile& energy, double entropy, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be a positive finite number");
  }
  if (energy.kinetic.empty()) throw ValidationError("free energy needs at least one step");
  double sum = 0.0;
  for (std::size_t i = 0; i < energy.kinetic.size(); ++i) sum += energy.kinetic[i] + std::fabs(energy.potential[i]);
  return sum / static_cast<double>(energy.kinetic.size()) - temperature * entropy;
}

double free_energy(const EmbeddedChain& chain, double temperature) {
  return free_energy(energy_profile(chain), trajectory_entropy(chain), temperature);
}

StatMechSummary statmech_summary(const EmbeddedChain& chain, const EnergyProfile& energy, double temperature) {
  StatMechSummary s;
  s.chain_id = chain.id;
  s.temperature = temperature;
  s.entropy = trajectory_entropy(chain);
  s.free_energy = free_energy(energy, s.entropy, temperature);
  return s;
}

}  // namespace phasechain
